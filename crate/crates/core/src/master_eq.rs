//! Time-local master equation for the central spin.
//!
//! dρ/dt = iΩ[ρ, σz] + Γ_d(σzρσz − ρ) + Γ_−(σ₋ρσ₊ − ½{σ₊σ₋, ρ}) + Γ_+(σ₊ρσ₋ − ½{σ₋σ₊, ρ})
//!
//! Matrices use the [`oracle`](crate::dynamics::oracle) layout: index 0 is spin up,
//! σz = diag(1, −1) and σ₊ = |0⟩⟨1|.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::oracle::Mat2;
use crate::dynamics::{Propagator, PropagatorDerivative, PropagatorSample};
use crate::model::{SubspaceSpectrum, ThermalWeights};

pub use crate::dynamics::propagator_derivatives;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateOptions {
    /// A rate below −eps_rate counts as negative.
    pub eps_rate: f64,
    /// Pole detection threshold for X₁² + X₂², |Z₁| and |X₂|.
    pub eps_singular: f64,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self { eps_rate: 1e-10, eps_singular: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSample {
    pub t: f64,
    pub omega: f64,
    pub gamma_d: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub any_negative: bool,
    pub singular: bool,
}

/// Rates from a propagator sample and its derivative.
///
/// Non-finite values at poles are replaced by 0 and flagged as singular.
pub fn rates_from(s: &PropagatorSample, d: &PropagatorDerivative, opts: &RateOptions) -> RateSample {
    let r = s.x1 * s.x1 + s.x2 * s.x2;
    let singular = r < opts.eps_singular || s.z1.abs() < opts.eps_singular || s.x2.abs() < opts.eps_singular;
    let log_z1 = d.dz1 / s.z1;
    // Phase of X₁ + iX₂ advances at −2Ω.
    let omega = 0.5 * (s.x2 * d.dx1 - s.x1 * d.dx2) / r;
    let gamma_d = 0.25 * (log_z1 - 2.0 * (s.x1 * d.dx1 + s.x2 * d.dx2) / r);
    let gamma_minus = -0.5 * (d.dz2 + log_z1 * (1.0 - s.z2));
    let gamma_plus = -0.5 * (-d.dz2 + log_z1 * (1.0 + s.z2));
    let clean = |v: f64| if v.is_finite() { v } else { 0.0 };
    let (omega, gamma_d, gamma_minus, gamma_plus) = (clean(omega), clean(gamma_d), clean(gamma_minus), clean(gamma_plus));
    let any_negative = gamma_d.min(gamma_minus).min(gamma_plus) < -opts.eps_rate;
    RateSample { t: s.t, omega, gamma_d, gamma_minus, gamma_plus, any_negative, singular }
}

pub fn rates(spec: &SubspaceSpectrum, w: &ThermalWeights, t: f64) -> RateSample {
    let (s, d) = Propagator::new(spec, w).sample_with_derivative(t);
    rates_from(&s, &d, &RateOptions::default())
}

impl Propagator {
    pub fn rates(&self, t: f64, opts: &RateOptions) -> RateSample {
        let (s, d) = self.sample_with_derivative(t);
        rates_from(&s, &d, opts)
    }

    pub fn rates_series(&self, times: &[f64], opts: &RateOptions) -> Vec<RateSample> {
        times.par_iter().map(|&t| self.rates(t, opts)).collect()
    }
}

/// Right-hand side of the master equation at state ρ.
pub fn generator_apply(rho: &Mat2, r: &RateSample) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let (uu, ud, du, dd) = (rho[0][0], rho[0][1], rho[1][0], rho[1][1]);
    let mut out = [[z; 2]; 2];
    // iΩ[ρ, σz]
    out[0][1] += -2.0 * i * r.omega * ud;
    out[1][0] += 2.0 * i * r.omega * du;
    // Γ_d(σzρσz − ρ)
    out[0][1] += -2.0 * r.gamma_d * ud;
    out[1][0] += -2.0 * r.gamma_d * du;
    // Γ_−: up → down
    out[0][0] += -r.gamma_minus * uu;
    out[1][1] += r.gamma_minus * uu;
    // Γ_+: down → up
    out[0][0] += r.gamma_plus * dd;
    out[1][1] += -r.gamma_plus * dd;
    let half = 0.5 * (r.gamma_minus + r.gamma_plus);
    out[0][1] -= half * ud;
    out[1][0] -= half * du;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::oracle::density_from_bloch;
    use crate::dynamics::{evolve_bloch, BlochVector};
    use crate::model::{compute_spectrum, thermal_weights, ModelParams};

    fn prop(p: &ModelParams) -> Propagator {
        Propagator::new(&compute_spectrum(p), &thermal_weights(p))
    }

    #[test]
    fn free_spin_has_no_dissipation() {
        let p = ModelParams::new(5, 0.0, 3.0, 1.0, 2.0).unwrap();
        let pr = prop(&p);
        for t in [0.3, 1.7, 4.0] {
            let r = pr.rates(t, &RateOptions::default());
            assert!(r.gamma_d.abs() < 1e-12 && r.gamma_minus.abs() < 1e-12 && r.gamma_plus.abs() < 1e-12);
            assert!(!r.any_negative);
        }
    }

    #[test]
    fn gain_loss_sum_is_log_derivative() {
        let p = ModelParams::new(4, 1.0, 3.0, 1.0, 10.0).unwrap();
        let pr = prop(&p);
        for t in [0.2, 0.9, 2.5] {
            let (s, d) = pr.sample_with_derivative(t);
            let r = rates_from(&s, &d, &RateOptions::default());
            assert!((r.gamma_plus + r.gamma_minus + d.dz1 / s.z1).abs() < 1e-10);
        }
    }

    #[test]
    fn generator_matches_exact_derivative() {
        let p = ModelParams::new(4, 0.8, 2.5, 1.2, 3.0).unwrap();
        let pr = prop(&p);
        let v0 = BlochVector::new(0.4, -0.3, 0.6);
        let rho = |t: f64| density_from_bloch(&evolve_bloch(&pr.sample(t), &v0));
        for t in [0.37, 1.1, 2.9] {
            let r = pr.rates(t, &RateOptions::default());
            assert!(!r.singular);
            let lhs = generator_apply(&rho(t), &r);
            let h = 1e-5;
            let (a, b) = (rho(t + h), rho(t - h));
            for i in 0..2 {
                for j in 0..2 {
                    let fd = (a[i][j] - b[i][j]) / (2.0 * h);
                    assert!((lhs[i][j] - fd).norm() < 1e-6, "t={t} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity() {
        let r = RateSample { t: 0.0, omega: 0.7, gamma_d: -0.2, gamma_minus: 0.5, gamma_plus: -0.1, any_negative: true, singular: false };
        let d = generator_apply(&density_from_bloch(&BlochVector::new(0.1, 0.2, 0.3)), &r);
        assert!((d[0][0] + d[1][1]).norm() < 1e-15);
        assert!((d[0][1] - d[1][0].conj()).norm() < 1e-15);
    }

    #[test]
    fn backflow_needs_a_negative_rate() {
        let p = ModelParams::new(4, 1.0, 3.0, 1.0, 10.0).unwrap();
        let pr = prop(&p);
        let opts = RateOptions::default();
        for k in 0..400 {
            let (s, d) = pr.sample_with_derivative(0.05 * k as f64 + 0.01);
            let r = rates_from(&s, &d, &opts);
            let rising = s.z1.signum() * d.dz1 > 1e-6;
            if rising && !r.singular {
                assert!(r.any_negative, "t={}", s.t);
            }
        }
    }

    #[test]
    fn pole_is_flagged() {
        let s = PropagatorSample { t: 1.0, x1: 0.5, x2: 0.0, z1: 0.7, z2: 0.1 };
        let d = PropagatorDerivative { dx1: 0.1, dx2: 0.2, dz1: 0.3, dz2: 0.0 };
        assert!(rates_from(&s, &d, &RateOptions::default()).singular);
        let s = PropagatorSample { z1: 0.0, ..s };
        let r = rates_from(&s, &d, &RateOptions::default());
        assert!(r.singular && r.gamma_minus.is_finite());
    }
}
