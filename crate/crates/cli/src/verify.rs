//! Self-checks: Dicke path against the full-space oracle, ξ-sum closed forms,
//! and the analytic FWHM against the measured one.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spinstar::asymptotics::{coefficients, xi_sum_closed, xi_sum_direct};
use spinstar::distances::distance_general;
use spinstar::dynamics::evolve_bloch;
use spinstar::dynamics::oracle::{
    apply_map, bloch_from_density, density_from_bloch, trace_distance, FullHilbertOracle, MAX_ORACLE_BATH,
};
use spinstar::timescales::{default_window, fwhm_analytic, fwhm_numeric, window_segments};
use spinstar::{
    compute_spectrum, thermal_weights, BlochVector, DistanceSeries, Error, ModelParams, PairCoefficients, Propagator,
    PropagatorSample, Result,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), measured, tolerance, pass: measured <= tolerance }
    }
}

pub const ORACLE_TOL: f64 = 1e-9;
pub const XI_REL_TOL: f64 = 1e-3;
pub const PERIOD_REL_TOL: f64 = 1e-2;
pub const WIDTH_REL_TOL: f64 = 5e-2;

pub fn random_bloch(rng: &mut impl Rng) -> BlochVector {
    let r = rng.random::<f64>().cbrt();
    let c: f64 = rng.random_range(-1.0..=1.0);
    let phi = rng.random_range(0.0..2.0 * PI);
    let s = (1.0 - c * c).sqrt();
    BlochVector::new(r * s * phi.cos(), r * s * phi.sin(), r * c)
}

/// g ∈ [−3, 3] away from 0, ω_s, ω_b ∈ [0.2, 5], T ∈ [0.5, 50].
pub fn random_params(rng: &mut impl Rng, n_bath: u32) -> ModelParams {
    let mut g: f64 = 0.0;
    while g.abs() < 1e-3 {
        g = rng.random_range(-3.0..=3.0);
    }
    let ws = rng.random_range(0.2..=5.0);
    let wb = rng.random_range(0.2..=5.0);
    let t = rng.random_range(0.5..=50.0);
    ModelParams::new(n_bath, g, ws, wb, t).expect("drawn parameters are valid")
}

/// Max componentwise deviation and max distance deviation over `draws` random parameter sets.
pub fn oracle_deviation(n_bath: u32, draws: usize, times: usize, states: usize, rng: &mut impl Rng) -> Result<(f64, f64)> {
    let mut bloch_dev: f64 = 0.0;
    let mut dist_dev: f64 = 0.0;
    for _ in 0..draws {
        let p = random_params(rng, n_bath);
        let oracle = FullHilbertOracle::new(&p)?;
        let prop = Propagator::new(&compute_spectrum(&p), &thermal_weights(&p));
        for _ in 0..times {
            let t = rng.random_range(0.0..=20.0);
            let s = prop.sample(t);
            let map = oracle.reduced_map(t);
            let full = |v: &BlochVector| apply_map(&map, &density_from_bloch(v));
            for _ in 0..states {
                let (a, b) = (random_bloch(rng), random_bloch(rng));
                let ra = full(&a);
                let exact = evolve_bloch(&s, &a);
                bloch_dev = bloch_dev.max(exact.max_abs_diff(&bloch_from_density(&ra)));
                let d = distance_general(&s, &PairCoefficients::from_states(a, b));
                dist_dev = dist_dev.max((d - trace_distance(&ra, &full(&b))).abs());
            }
        }
    }
    Ok((bloch_dev, dist_dev))
}

/// Worst relative deviation of the closed ξ-sums at the collapse-revival reference point.
pub fn xi_deviation(k: u32, samples: usize, rng: &mut impl Rng) -> f64 {
    let p = ModelParams::new(1000, 1.0, 3.0, 1.0, 10.0).unwrap();
    let c = coefficients(&p).unwrap();
    let beta = p.beta();
    (0..samples)
        .map(|_| {
            let t = rng.random_range(0.0..=1000.0 * PI);
            let d = xi_sum_direct(k, 1000, beta, c.nu0, c.nu1, t);
            let cl = xi_sum_closed(k, 1000, beta, c.nu0, c.nu1, t);
            ((cl - d) / d).abs()
        })
        .fold(0.0, f64::max)
}

/// Relative period and width errors of the measured envelope against the analytic one.
pub fn fwhm_cross_check() -> Result<(f64, f64)> {
    let p = ModelParams::new(1000, 1.0, 3.0, 1.0, 10.0)?;
    let c = coefficients(&p)?;
    let pc = PairCoefficients::from_alphas(0.188, 3.614)?;
    let analytic = fwhm_analytic(&p, &c, &pc, 1)?;
    let w = default_window(&c);
    let span = 2.0 * analytic.t_cr;
    let stride = ((analytic.t_cr / w) / 500.0).floor().max(1.0) as usize;
    let prop = Propagator::new(&compute_spectrum(&p), &thermal_weights(&p));
    let samples: Vec<PropagatorSample> = window_segments(0.0, span + w, w, stride, 64)
        .into_iter()
        .flat_map(|(a, st, n)| prop.sample_uniform(a, st, n))
        .collect();
    let numeric = fwhm_numeric(&DistanceSeries::from_samples(&samples, &pc)?, w)?;
    Ok((
        ((numeric.t_cr - analytic.t_cr) / analytic.t_cr).abs(),
        ((numeric.t_r - analytic.t_r) / analytic.t_r).abs(),
    ))
}

pub fn run_checks(n_bath: u32, draws: usize, seed: u64) -> Result<Vec<Check>> {
    if n_bath > MAX_ORACLE_BATH {
        return Err(Error::DimensionTooLarge { n: n_bath, max: MAX_ORACLE_BATH });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (bloch, dist) = oracle_deviation(n_bath, draws, 5, 3, &mut rng)?;
    let mut checks = vec![Check::new("oracle_bloch", bloch, ORACLE_TOL), Check::new("oracle_distance", dist, ORACLE_TOL)];
    for k in 0..3 {
        checks.push(Check::new(&format!("xi_sum_k{k}"), xi_deviation(k, 50, &mut rng), XI_REL_TOL));
    }
    let (period, width) = fwhm_cross_check()?;
    checks.push(Check::new("fwhm_period", period, PERIOD_REL_TOL));
    checks.push(Check::new("fwhm_width", width, WIDTH_REL_TOL));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_repeats() {
        let a = run_checks(2, 3, 7).unwrap();
        assert!(a.iter().all(|c| c.pass), "{a:?}");
        assert_eq!(a, run_checks(2, 3, 7).unwrap());
    }

    #[test]
    fn thirteen_spins_is_too_many() {
        assert!(matches!(run_checks(13, 1, 0), Err(Error::DimensionTooLarge { n: 13, .. })));
    }
}
