//! Large-N closed forms: coefficients, slow/fast frequencies, phases,
//! means, oscillation amplitudes and envelopes of the trace distances.
//!
//! Slow angle θ = ν_cr·t. Fast carrier ν₀ = |2(N+1)g − Δ|.

use num_complex::Complex64;
use serde::Serialize;

use crate::distances::PairCoefficients;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Relative tolerance for treating 2gN − Δ as zero.
const A3_RESONANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FastTerm {
    pub nu0: f64,
    pub nu1: f64,
    pub mu: [f64; 3],
}

/// Per-branch coefficients of the ξ-expansion of the coherence ρ₀₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FastTerms {
    /// sgn(2gN − Δ), with 0 mapped to +1.
    pub sign: f64,
    pub terms: [FastTerm; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub nu0: f64,
    /// 2(N+1)g − Δ before taking the absolute value.
    pub nu0_signed: f64,
    pub nu1: f64,
    pub nu_cr: f64,
    pub validity_ok: bool,
    /// Interval of g where the expansion diverges.
    pub validity_interval: (f64, f64),
    pub fast_terms: FastTerms,
}

pub fn coefficients(params: &ModelParams) -> Result<AsymptoticCoefficients> {
    let n = params.n();
    let g = params.g();
    let d = params.delta();
    let nu0_signed = 2.0 * (n + 1.0) * g - d;
    if nu0_signed == 0.0 {
        return Err(Error::Resonance);
    }
    let nu0 = nu0_signed.abs();
    let a1 = 8.0 * g * g * n * (n + 1.0) / (nu0 * nu0);
    let a2 = -8.0 * g * g * n * n * (nu0_signed + 2.0 * d).powi(2) / nu0.powi(4);
    let a3 = 4.0 * g * g * n * n / (2.0 * g * n - d).powi(2);
    let nu1 = 4.0 * n * g * d / nu0;
    let nu_cr = 4.0 * g * d / nu0;
    let root = 2.0 * d.abs() * (n * (2.0 * n + 1.0)).sqrt();
    let denom = 2.0 * (n + 1.0).powi(2);
    let lo = ((3.0 * n + 1.0) * d - root) / denom;
    let hi = ((3.0 * n + 1.0) * d + root) / denom;
    let validity_ok = g < lo || g > hi;
    Ok(AsymptoticCoefficients {
        a1,
        a2,
        a3,
        nu0,
        nu0_signed,
        nu1,
        nu_cr,
        validity_ok,
        validity_interval: (lo, hi),
        fast_terms: fast_terms(n, a3, nu0, nu1, 2.0 * g * n - d),
    })
}

fn fast_terms(n: f64, a3: f64, nu0: f64, nu1: f64, split: f64) -> FastTerms {
    let slow = nu1 / (2.0 * n);
    let edge = [0.0, a3, -a3];
    let edge_n = [a3 / n, a3, -a3];
    let main = [1.0 - a3 / n, -2.0 * a3, a3];
    let tail = [0.0, 0.0, a3];
    let sign = if split < 0.0 { -1.0 } else { 1.0 };
    let mus = if sign > 0.0 { [edge, edge_n, main, tail] } else { [edge_n, edge, tail, main] };
    let freqs = [(slow, 0.0), (-slow, 0.0), (nu0, nu1), (-nu0, -nu1)];
    let terms = std::array::from_fn(|h| FastTerm { nu0: freqs[h].0, nu1: freqs[h].1, mu: mus[h] });
    FastTerms { sign, terms }
}

/// P±(x) = cosh β ± cos x.
pub fn p_functions(params: &ModelParams, x: f64) -> (f64, f64) {
    let ch = params.beta().cosh();
    (ch + x.cos(), ch - x.cos())
}

/// Hyperbolic functions of β = ω_b/T, computed once from e^β.
#[derive(Debug, Clone, Copy)]
struct Thermal {
    ep: f64,
    em: f64,
    ch: f64,
    sh: f64,
    coth_half: f64,
}

impl Thermal {
    fn new(beta: f64) -> Self {
        let ep = beta.exp();
        let em = 1.0 / ep;
        let eh = (beta / 2.0).exp();
        Self {
            ep,
            em,
            ch: (ep + em) / 2.0,
            sh: (ep - em) / 2.0,
            coth_half: (eh + 1.0 / eh) / (eh - 1.0 / eh),
        }
    }
}

/// φ₀, φ₁, φ₂ at slow angle θ.
pub fn phases012(beta: f64, theta: f64) -> (f64, f64, f64) {
    let th = Thermal::new(beta);
    phases012_inner(&th, theta)
}

fn phases012_inner(th: &Thermal, theta: f64) -> (f64, f64, f64) {
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    let phi0 = s.atan2(c - th.ep);
    let phi1 = (th.sh * s).atan2(1.0 - th.ch * c);
    let ch2 = 2.0 * th.ch * th.ch - 1.0;
    let sh2 = 2.0 * th.sh * th.ch;
    let num = (ch2 - 3.0) * s + th.ch * s2;
    let den = th.sh * (c2 - 3.0) + sh2 * c;
    (phi0, phi1, num.atan2(-den))
}

/// Σ_ξ e^{−ξNβ} ξ^k [1 − cos(ν₀t + ν₁ξt)] over ξ = 0, 1/N, …, 1.
pub fn xi_sum_direct(k: u32, n: u32, beta: f64, nu0: f64, nu1: f64, t: f64) -> f64 {
    let nf = n as f64;
    crate::sum::compensated_sum((0..=n).map(|i| {
        let xi = i as f64 / nf;
        (-(i as f64) * beta).exp() * xi.powi(k as i32) * (1.0 - (nu0 * t + nu1 * xi * t).cos())
    }))
}

/// Closed form of [`xi_sum_direct`] for large N, k ∈ {0, 1, 2}.
pub fn xi_sum_closed(k: u32, n: u32, beta: f64, nu0: f64, nu1: f64, t: f64) -> f64 {
    let th = Thermal::new(beta);
    let nf = n as f64;
    let theta = nu1 * t / nf;
    let (pp, pm) = (th.ch + theta.cos(), th.ch - theta.cos());
    let (phi0, phi1, phi2) = phases012_inner(&th, theta);
    let csch_half = 1.0 / (beta / 2.0).sinh();
    match k {
        0 => (beta / 2.0).exp() * ((nu0 * t - phi0).cos() / (2.0 * pm).sqrt() + csch_half / 2.0),
        1 => (nu0 * t - phi1).cos() / (2.0 * nf * pm) + csch_half.powi(2) / (4.0 * nf),
        2 => {
            (pp / pm.powi(3)).sqrt() * (nu0 * t - phi2).cos() / (2.0 * nf * nf)
                + th.sh * csch_half.powi(4) / (8.0 * nf * nf)
        }
        _ => panic!("closed form only for k = 0, 1, 2"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeSample {
    pub t: f64,
    pub mean: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub upper: f64,
    pub lower: f64,
}

/// Full and simplified envelopes of a general pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralEnvelope {
    pub full: EnvelopeSample,
    pub simplified_upper: f64,
    pub simplified_lower: f64,
}

/// Direction of the lower-envelope peaks of a general pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PeakDirection {
    Upward,
    Downward,
}

/// Validated large-N evaluator for one parameter set.
#[derive(Debug, Clone)]
pub struct Asymptotics {
    pub params: ModelParams,
    pub coeffs: AsymptoticCoefficients,
    th: Thermal,
}

impl Asymptotics {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let coeffs = coefficients(params)?;
        Self::with_coefficients(params, coeffs)
    }

    pub fn with_coefficients(params: &ModelParams, coeffs: AsymptoticCoefficients) -> Result<Self> {
        let beta = params.beta();
        if beta <= 0.0 {
            return Err(Error::NonPositiveBeta(beta));
        }
        if !coeffs.validity_ok {
            let (lo, hi) = coeffs.validity_interval;
            return Err(Error::OutsideValidity { g: params.g(), lo, hi });
        }
        Ok(Self { params: *params, coeffs, th: Thermal::new(beta) })
    }

    fn n(&self) -> f64 {
        self.params.n()
    }

    fn a3_checked(&self) -> Result<f64> {
        let split = 2.0 * self.params.g() * self.n() - self.params.delta();
        let scale = (2.0 * self.params.g() * self.n()).abs().max(self.params.delta().abs());
        if split.abs() <= A3_RESONANCE_TOL * scale {
            Err(Error::ResonanceA3)
        } else {
            Ok(self.coeffs.a3)
        }
    }

    fn slow(&self, t: f64) -> (f64, f64, f64) {
        let theta = self.coeffs.nu_cr * t;
        let c = theta.cos();
        (theta, self.th.ch + c, self.th.ch - c)
    }

    /// Time-independent mean D̄_z.
    pub fn mean_z(&self) -> f64 {
        let n = self.n();
        let ct = self.th.coth_half;
        1.0 - self.coeffs.a1 / n * ct - self.coeffs.a2 / (n * n) * ct * ct
    }

    pub fn envelope_z(&self, t: f64) -> EnvelopeSample {
        let n = self.n();
        let (a1, a2) = (self.coeffs.a1, self.coeffs.a2);
        let (theta, pp, pm) = self.slow(t);
        let (_, phi1, phi2) = phases012_inner(&self.th, theta);
        let ratio = (pp / pm).sqrt();
        let r2 = a1 * a1 / (n * n)
            + a2 * a2 / n.powi(4) * pp / pm
            + 2.0 * a1 * a2 / n.powi(3) * ratio * (phi1 - phi2).cos();
        let amplitude = self.th.sh / pm * r2.max(0.0).sqrt();
        let (u, v) = (a1 * n * pm.sqrt(), a2 * pp.sqrt());
        let phase = (u * phi1.sin() + v * phi2.sin()).atan2(u * phi1.cos() + v * phi2.cos());
        let mean = self.mean_z();
        EnvelopeSample { t, mean, amplitude, phase, upper: mean + amplitude, lower: mean - amplitude }
    }

    /// D̄_x²(t).
    fn mean_x2(&self, a3: f64, theta: f64, pp: f64, pm: f64) -> f64 {
        let n = self.n();
        let (ch, em) = (self.th.ch, self.th.em);
        let q = 1.0 - a3 / n;
        (ch - 1.0) * q * q / pm
            + a3 * a3 * pp / (n * n * (ch - 1.0))
            + 2.0 * a3 * (ch - 1.0) * (em - q * theta.cos()) / (n * pm * pm)
    }

    /// φ₄ with the sign of the fraction carried by the numerator, as the
    /// denominator is negative throughout the large-N regime.
    fn phi4(&self, a3: f64, theta: f64, pm: f64) -> f64 {
        let n = self.n();
        let (ch, em, ep) = (self.th.ch, self.th.em, self.th.ep);
        let c = theta.cos();
        let x = (n - a3) * pm + a3 * em;
        let num = (em * c + ch) * x - a3 * (ep * c + ch);
        let den = (em * c - ch) * x + a3 * (ep * c - ch);
        (-num * (theta / 2.0).tan()).atan2(-den)
    }

    pub fn envelope_x(&self, t: f64) -> Result<EnvelopeSample> {
        let a3 = self.a3_checked()?;
        let (theta, pp, pm) = self.slow(t);
        let mean = self.mean_x2(a3, theta, pp, pm);
        let amplitude = 2.0 * a3 / self.n() * (pp / pm).sqrt();
        Ok(EnvelopeSample {
            t,
            mean,
            amplitude,
            phase: self.phi4(a3, theta, pm),
            upper: (mean + amplitude).sqrt(),
            lower: (mean - amplitude).max(0.0).sqrt(),
        })
    }

    pub fn envelope_general(&self, pc: &PairCoefficients, t: f64) -> Result<GeneralEnvelope> {
        let n = self.n();
        let (ax, az) = (pc.alpha_x, pc.alpha_z);
        let (theta, pp, pm) = self.slow(t);
        let sh = self.th.sh;
        let a1 = self.coeffs.a1;
        let ez = self.envelope_z(t);
        let dz = ez.mean;
        let (mean_x2, a3, phi4) = if ax > 0.0 {
            let a3 = self.a3_checked()?;
            (self.mean_x2(a3, theta, pp, pm), a3, self.phi4(a3, theta, pm))
        } else {
            (0.0, 0.0, 0.0)
        };
        let p_sqrt = (pp * pm).sqrt();
        let z_term = az * a1 * sh;
        let x_term = ax * a3 * p_sqrt;
        let inner = z_term * z_term + x_term * x_term - 2.0 * z_term * x_term * (ez.phase - phi4).cos();
        let amplitude = inner.max(0.0).sqrt() / (2.0 * n * pm);
        let phase = (x_term * phi4.sin() - z_term * ez.phase.sin())
            .atan2(x_term * phi4.cos() - z_term * ez.phase.cos());
        let mean = 0.25 * az * dz * dz + 0.25 * ax * mean_x2;
        let base = az * dz * dz / 4.0 + ax * (self.th.ch - 1.0) / (4.0 * pm);
        let split = az * a1 * sh / (2.0 * n * pm);
        Ok(GeneralEnvelope {
            full: EnvelopeSample {
                t,
                mean,
                amplitude,
                phase,
                upper: (mean + amplitude).sqrt(),
                lower: (mean - amplitude).max(0.0).sqrt(),
            },
            simplified_upper: (base + split).sqrt(),
            simplified_lower: (base - split).max(0.0).sqrt(),
        })
    }

    /// Coefficient of 1/P₋ in the simplified lower envelope squared.
    pub fn lower_peak_coefficient(&self, pc: &PairCoefficients) -> f64 {
        pc.alpha_x * (self.th.ch - 1.0) / 4.0 - pc.alpha_z * self.coeffs.a1 * self.th.sh / (2.0 * self.n())
    }

    pub fn lower_peak_direction(&self, pc: &PairCoefficients) -> PeakDirection {
        if self.lower_peak_coefficient(pc) > 0.0 {
            PeakDirection::Upward
        } else {
            PeakDirection::Downward
        }
    }

    /// Four-frequency terms of the |±⟩ coherence amplitude (|·| ≈ D_x), one complex number per h.
    ///
    /// The fast terms rotate at ±(ν₀ + ν_cr/2); without the half-slow offset
    /// the relative phase of fast and slow parts drifts by θ/2.
    pub fn fast_term_amplitudes(&self, t: f64) -> Result<[Complex64; 4]> {
        self.a3_checked()?;
        let n = self.n();
        let r = self.th.em;
        let half = self.coeffs.nu_cr / 2.0;
        Ok(std::array::from_fn(|h| {
            let term = self.coeffs.fast_terms.terms[h];
            let z = Complex64::from_polar(r, -term.nu1 * t / n);
            let one = Complex64::new(1.0, 0.0);
            let g0 = one / (one - z);
            let g1 = z / ((one - z) * (one - z)) / n;
            let g2 = z * (one + z) / ((one - z) * (one - z) * (one - z)) / (n * n);
            let series = g0 * term.mu[0] + g1 * term.mu[1] + g2 * term.mu[2];
            let carrier = match h {
                2 => term.nu0 + half,
                3 => term.nu0 - half,
                _ => term.nu0,
            };
            Complex64::from_polar(1.0 - r, -carrier * t) * series
        }))
    }

    /// D_x envelope from the four-frequency amplitudes: slow part S, dominant fast part F.
    pub fn envelope_x_series(&self, t: f64) -> Result<EnvelopeSample> {
        let terms = self.fast_term_amplitudes(t)?;
        let slow = terms[0] + terms[1];
        let (main, rest) = if self.coeffs.fast_terms.sign > 0.0 { (terms[2], terms[3]) } else { (terms[3], terms[2]) };
        let carrier = Complex64::from_polar(1.0, self.coeffs.nu0 * t);
        let fast = if self.coeffs.fast_terms.sign > 0.0 { main * carrier } else { main / carrier };
        let (s, f, r) = (slow.norm(), fast.norm(), rest.norm());
        Ok(EnvelopeSample {
            t,
            mean: s * s + f * f,
            amplitude: 2.0 * s * f,
            phase: (fast * slow.conj()).arg(),
            upper: s + f + r,
            lower: ((s - f).abs() - r).max(0.0),
        })
    }
}

pub fn envelope_z(params: &ModelParams, coeffs: &AsymptoticCoefficients, t: f64) -> Result<EnvelopeSample> {
    Ok(Asymptotics::with_coefficients(params, *coeffs)?.envelope_z(t))
}

pub fn envelope_x(params: &ModelParams, coeffs: &AsymptoticCoefficients, t: f64) -> Result<EnvelopeSample> {
    Asymptotics::with_coefficients(params, *coeffs)?.envelope_x(t)
}

pub fn envelope_general(
    params: &ModelParams,
    coeffs: &AsymptoticCoefficients,
    pc: &PairCoefficients,
    t: f64,
) -> Result<GeneralEnvelope> {
    Asymptotics::with_coefficients(params, *coeffs)?.envelope_general(pc, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn reference() -> ModelParams {
        ModelParams::new(1000, 1.0, 3.0, 1.0, 10.0).unwrap()
    }

    #[test]
    fn coefficient_values() {
        let c = coefficients(&reference()).unwrap();
        assert_eq!(c.nu0, 2000.0);
        assert!((c.nu_cr - 0.004).abs() < 1e-15);
        assert!((c.a1 - 2.002).abs() < 1e-12);
        assert!((c.a3 - 1.002003).abs() < 1e-6);
        assert!((c.a2 + 2.00801).abs() < 1e-5);
        assert!((c.nu_cr - c.nu1 / 1000.0).abs() < 1e-12);
        assert!(c.validity_ok);
        assert_eq!(c.fast_terms.sign, 1.0);
    }

    #[test]
    fn resonance_and_no_detuning() {
        // 2(N+1)g = Δ with N = 1, g = 0.5, Δ = 2.
        let p = ModelParams::new(1, 0.5, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(coefficients(&p), Err(Error::Resonance));
        let p = ModelParams::new(100, 1.0, 1.0, 1.0, 1.0).unwrap();
        let c = coefficients(&p).unwrap();
        assert_eq!(c.nu_cr, 0.0);
        assert!(c.validity_ok);
    }

    #[test]
    fn p_function_values() {
        let (pp, pm) = p_functions(&reference(), 0.0);
        assert!((pm - 0.0050042).abs() < 1e-7);
        assert!((pp * pm - (0.1f64.cosh().powi(2) - 1.0)).abs() < 1e-15);
        let (pp, pm) = p_functions(&reference(), PI / 2.0);
        assert!((pp - pm).abs() < 1e-15);
    }

    #[test]
    fn validity_gate() {
        let p = ModelParams::new(1000, 1e-3, 3.0, 1.0, 10.0).unwrap();
        assert!(matches!(Asymptotics::new(&p), Err(Error::OutsideValidity { .. })));
        let p = ModelParams::new(1000, 1.0, 3.0, -1.0, 10.0).unwrap();
        assert!(matches!(Asymptotics::new(&p), Err(Error::NonPositiveBeta(_))));
    }

    #[test]
    fn z_envelope_reference() {
        let a = Asymptotics::new(&reference()).unwrap();
        let mean = a.mean_z();
        assert!((mean - 0.96073).abs() < 1e-5);
        let peak = a.envelope_z(0.0);
        assert!((peak.amplitude - 0.03927).abs() < 1e-5);
        assert!((peak.upper - 1.0).abs() < 1e-4);
        let k1 = a.envelope_z(2.0 * PI / a.coeffs.nu_cr);
        assert!((k1.upper - 1.0).abs() < 1e-3);
        let collapse = a.envelope_z(PI / a.coeffs.nu_cr);
        let grid: Vec<f64> = (0..400).map(|i| a.envelope_z(i as f64 * 4.0).amplitude).collect();
        assert!(grid.iter().all(|w| *w >= collapse.amplitude - 1e-12));
    }

    #[test]
    fn x_envelope_limits() {
        let a = Asymptotics::new(&reference()).unwrap();
        let e = a.envelope_x(PI / a.coeffs.nu_cr).unwrap();
        let ch = 0.1f64.cosh();
        let dominant = (ch - 1.0) * (1.0 - a.coeffs.a3 / 1000.0).powi(2) / (ch + 1.0);
        assert!((e.mean - dominant).abs() < 2e-5);
        assert!((e.mean - 0.0025).abs() < 1e-4);
        assert!((a.envelope_x(0.0).unwrap().upper - 1.0).abs() < 2e-2);

        let cold = Asymptotics::new(&reference().with_t_bath(0.02).unwrap()).unwrap();
        let e = cold.envelope_x(0.0).unwrap();
        let a3n = cold.coeffs.a3 / 1000.0;
        assert!((e.amplitude - 2.0 * a3n).abs() < 1e-12);
        assert!((e.mean - (1.0 - a3n).powi(2)).abs() < 1e-5);
        assert!(e.upper.is_finite() && e.lower.is_finite());
    }

    #[test]
    fn a3_resonance_is_an_error() {
        // 2gN = Δ: N = 1000, g = 1e-3, Δ = 2 sits inside the divergent interval,
        // so build the evaluator directly.
        let p = ModelParams::new(1000, 1e-3, 3.0, 1.0, 10.0).unwrap();
        let mut c = coefficients(&p).unwrap();
        c.validity_ok = true;
        let a = Asymptotics::with_coefficients(&p, c).unwrap();
        assert_eq!(a.envelope_x(1.0), Err(Error::ResonanceA3));
        assert!(a.envelope_general(&PairCoefficients::z_pair(), 1.0).is_ok());
    }

    #[test]
    fn general_reduces_to_z() {
        let a = Asymptotics::new(&reference()).unwrap();
        let pc = PairCoefficients::from_alphas(0.0, 4.0).unwrap();
        for t in [0.0, 100.0, 700.0, 1570.0] {
            let g = a.envelope_general(&pc, t).unwrap();
            let z = a.envelope_z(t);
            // Agreement holds to O(W_z²).
            assert!((g.full.upper - z.upper).abs() < 5e-3, "{t}");
            assert!((g.full.lower - z.lower).abs() < 5e-3, "{t}");
        }
    }

    #[test]
    fn lower_peak_directions() {
        let a = Asymptotics::new(&reference()).unwrap();
        let pa = PairCoefficients::from_alphas(0.188, 3.614).unwrap();
        let pb = PairCoefficients::from_alphas(0.345, 3.273).unwrap();
        assert_eq!(a.lower_peak_direction(&pa), PeakDirection::Downward);
        assert_eq!(a.lower_peak_direction(&pb), PeakDirection::Upward);
        assert!((a.lower_peak_coefficient(&pa) + 1.2717e-4).abs() < 1e-8);
        assert!((a.lower_peak_coefficient(&pb) - 1.0344e-4).abs() < 1e-8);
    }

    #[test]
    fn fast_term_branches_are_conjugate() {
        let plus = Asymptotics::new(&reference()).unwrap();
        let c = plus.coeffs;
        let mut mirrored = c;
        mirrored.fast_terms = fast_terms(1000.0, c.a3, c.nu0, c.nu1, -1.0);
        let minus = Asymptotics::with_coefficients(&reference(), mirrored).unwrap();
        for t in [3.0, 250.0, 1111.0] {
            let a: Complex64 = plus.fast_term_amplitudes(t).unwrap().iter().sum();
            let b: Complex64 = minus.fast_term_amplitudes(t).unwrap().iter().sum();
            assert!((a.norm_sqr() - b.norm_sqr()).abs() < 1e-10, "{t}");
            assert!((a - b.conj()).norm() < 1e-10);
        }
        let neg = Asymptotics::new(&ModelParams::new(1000, -1.0, 3.0, 1.0, 10.0).unwrap()).unwrap();
        assert_eq!(neg.coeffs.fast_terms.sign, -1.0);
    }

    #[test]
    fn xi_sums_small_check() {
        let (n, beta, nu0, nu1) = (1000, 0.1, 2000.0, 4.0);
        for t in [1.0, 37.0, 800.0] {
            for k in 0..3 {
                let d = xi_sum_direct(k, n, beta, nu0, nu1, t);
                let c = xi_sum_closed(k, n, beta, nu0, nu1, t);
                assert!(((d - c) / d).abs() < 1e-3, "k={k} t={t}: {d} vs {c}");
            }
        }
    }
}
