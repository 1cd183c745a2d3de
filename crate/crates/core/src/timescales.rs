//! Collapse-revival period, revival (FWHM) and collapse times.

use std::f64::consts::PI;

use serde::Serialize;

use crate::asymptotics::{AsymptoticCoefficients, Asymptotics};
use crate::distances::{DistanceSeries, PairCoefficients};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Below this α_x the analytic half width is 0/0.
pub const ALPHA_X_MIN: f64 = 1e-12;

/// A pattern is resolved when one period holds this many envelope windows.
pub const SEPARATION_WINDOWS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    LargeGn,
    OrderOneC,
    SmallGn,
}

impl Regime {
    /// Classifies by c = gN/Δ.
    pub fn classify(c: f64) -> Self {
        let c = c.abs();
        if c >= 10.0 {
            Regime::LargeGn
        } else if c <= 0.1 {
            Regime::SmallGn
        } else {
            Regime::OrderOneC
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LargeGn => "large-gN",
            Regime::OrderOneC => "order-one-c",
            Regime::SmallGn => "small-gN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodReport {
    /// g ≠ 0 and Δ ≠ 0.
    pub exists: bool,
    /// |π(N+1)/Δ − π/(2g)| = 2π/|ν_cr|; `None` when the pattern does not exist.
    pub t_cr: Option<f64>,
    /// Whether T_cr spans at least [`SEPARATION_WINDOWS`] windows of 4π/ν₀.
    pub resolved: bool,
    /// c = gN/Δ.
    pub c: f64,
    pub regime: Option<Regime>,
    /// πN/Δ.
    pub approx_large_gn: f64,
    /// π(2c − 1)/(2g).
    pub approx_order_one_c: f64,
    /// π/(2g).
    pub approx_small_gn: f64,
}

pub fn period(params: &ModelParams, coeffs: &AsymptoticCoefficients) -> PeriodReport {
    let (n, g, d) = (params.n(), params.g(), params.delta());
    let exists = g != 0.0 && d != 0.0;
    let c = if d != 0.0 { g * n / d } else { f64::INFINITY };
    let t_cr = exists.then(|| (PI * (n + 1.0) / d - PI / (2.0 * g)).abs());
    let resolved = t_cr.is_some_and(|t| t >= SEPARATION_WINDOWS * 4.0 * PI / coeffs.nu0);
    PeriodReport {
        exists,
        t_cr,
        resolved,
        c,
        regime: exists.then(|| Regime::classify(c)),
        approx_large_gn: PI * n / d,
        approx_order_one_c: PI * (2.0 * c - 1.0) / (2.0 * g),
        approx_small_gn: PI / (2.0 * g),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapseRevivalReport {
    pub t_cr: f64,
    pub t_p: f64,
    pub delta: f64,
    pub t_r: f64,
    pub t_c: f64,
    pub ratio: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub max_gamma_plus: f64,
    pub max_gamma_minus: f64,
    pub min_gamma_plus: f64,
    pub min_gamma_minus: f64,
    pub w_value: Option<f64>,
    pub exists: bool,
    pub regime: Option<Regime>,
}

/// Half width from the simplified envelope: δ = arccos(cosh β − 2α_x sinh²β / w)/ν_cr.
pub fn fwhm_analytic(
    params: &ModelParams,
    coeffs: &AsymptoticCoefficients,
    pc: &PairCoefficients,
    k: u32,
) -> Result<CollapseRevivalReport> {
    let pr = period(params, coeffs);
    let t_cr = pr.t_cr.ok_or(Error::NoCollapseRevival)?;
    if pc.alpha_x <= ALPHA_X_MIN {
        return Err(Error::AlphaXDegenerate(pc.alpha_x));
    }
    let asym = Asymptotics::with_coefficients(params, *coeffs)?;
    let (ax, az) = (pc.alpha_x, pc.alpha_z);
    let beta = params.beta();
    let (ch, sh) = (beta.cosh(), beta.sinh());
    let half = beta / 2.0;
    let dz2 = asym.mean_z().powi(2);
    let s = az * dz2 + ax;
    let w = ax * ch - az * dz2 * (ch + 1.0) + (ch + 1.0) * s * (1.0 - ax / (half.cosh().powi(2) * s)).sqrt();
    let arg = ch - 2.0 * ax * sh * sh / w;
    if !(-1.0..=1.0).contains(&arg) {
        return Err(Error::ArccosDomain(arg));
    }
    let nu = coeffs.nu_cr.abs();
    let delta = arg.acos() / nu;
    let t_r = 2.0 * delta;
    let t_c = t_cr - t_r;
    let n = params.n();
    let split_max = 2.0 * coeffs.a1 * az / (half.tanh() * n);
    let split_min = 2.0 * coeffs.a1 * az * half.tanh() / n;
    let base_min = az * dz2 + ax * half.tanh().powi(2);
    let root = |x: f64| 0.5 * x.max(0.0).sqrt();
    let (max_p, max_m) = (root(s + split_max), root(s - split_max));
    let (min_p, min_m) = (root(base_min + split_min), root(base_min - split_min));
    Ok(CollapseRevivalReport {
        t_cr,
        t_p: 2.0 * k as f64 * PI / nu,
        delta,
        t_r,
        t_c,
        ratio: t_c / t_r,
        h_plus: max_p - min_p,
        h_minus: max_m - min_m,
        max_gamma_plus: max_p,
        max_gamma_minus: max_m,
        min_gamma_plus: min_p,
        min_gamma_minus: min_m,
        w_value: Some(w),
        exists: true,
        regime: pr.regime,
    })
}

/// Default envelope window: two fast periods, 4π/ν₀.
pub fn default_window(coeffs: &AsymptoticCoefficients) -> f64 {
    4.0 * PI / coeffs.nu0
}

/// Uniform segments (start, step, count), one per sampled window, for
/// resolving a two-scale signal without sampling every fast period.
///
/// Windows of width `window` tile [t0, t1]; every `stride`-th one is sampled
/// with `per_window` points.
pub fn window_segments(t0: f64, t1: f64, window: f64, stride: usize, per_window: usize) -> Vec<(f64, f64, usize)> {
    let count = ((t1 - t0) / window).floor() as usize;
    let step = window / per_window as f64;
    (0..count)
        .step_by(stride.max(1))
        .map(|i| (t0 + i as f64 * window, step, per_window))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EnvPoint {
    t: f64,
    hi: f64,
    lo: f64,
}

/// Max/min of the series over consecutive blocks of width `window`, each
/// anchored at its first sample, so burst grids map one burst to one block.
/// Blocks covering less than half a window are dropped.
fn block_envelope(series: &DistanceSeries, window: f64) -> Vec<EnvPoint> {
    let edge = window * (1.0 - 1e-9);
    let mut out = Vec::new();
    let mut push = |(a, b, hi, lo): (f64, f64, f64, f64)| {
        if b - a >= window / 2.0 {
            out.push(EnvPoint { t: (a + b) / 2.0, hi, lo });
        }
    };
    let mut block: Option<(f64, f64, f64, f64)> = None;
    for (&t, &d) in series.grid.iter().zip(&series.d_values) {
        match block.as_mut() {
            Some(b) if t - b.0 < edge => {
                b.1 = t;
                b.2 = b.2.max(d);
                b.3 = b.3.min(d);
            }
            _ => {
                if let Some(done) = block.replace((t, t, d, d)) {
                    push(done);
                }
            }
        }
    }
    if let Some(done) = block {
        push(done);
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Peak {
    t: f64,
    width: Option<f64>,
}

/// Peaks of `y` with hysteresis around the half level; widths from linear
/// interpolation of the half-level crossings (edge peaks have none).
fn find_peaks(t: &[f64], y: &[f64]) -> Vec<Peak> {
    let (ymax, ymin) = y.iter().fold((f64::MIN, f64::MAX), |(a, b), &v| (a.max(v), b.min(v)));
    let range = ymax - ymin;
    if !(range > 1e-9 * ymax.abs().max(1.0)) {
        return Vec::new();
    }
    let level = (ymax + ymin) / 2.0;
    let (enter, leave) = (level + 0.05 * range, level - 0.05 * range);
    let n = y.len();
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        if y[i] <= enter {
            i += 1;
            continue;
        }
        let mut j = i;
        let mut top = i;
        while j < n && y[j] >= leave {
            if y[j] > y[top] {
                top = j;
            }
            j += 1;
        }
        let mut l = top;
        while l > 0 && y[l - 1] >= level {
            l -= 1;
        }
        let mut r = top;
        while r + 1 < n && y[r + 1] >= level {
            r += 1;
        }
        let left = (l > 0).then(|| cross(t[l - 1], y[l - 1], t[l], y[l], level));
        let right = (r + 1 < n).then(|| cross(t[r], y[r], t[r + 1], y[r + 1], level));
        peaks.push(match (left, right) {
            (Some(a), Some(b)) => Peak { t: (a + b) / 2.0, width: Some(b - a) },
            _ => Peak { t: t[top], width: None },
        });
        i = j.max(r + 1);
    }
    peaks
}

fn cross(t0: f64, y0: f64, t1: f64, y1: f64, level: f64) -> f64 {
    if y1 == y0 {
        (t0 + t1) / 2.0
    } else {
        t0 + (level - y0) * (t1 - t0) / (y1 - y0)
    }
}

/// Period, FWHM and collapse time measured on the upper envelope of a series.
///
/// The envelope is the per-block max/min over blocks of width `window`.
/// At least three windows and two envelope peaks are needed.
pub fn fwhm_numeric(series: &DistanceSeries, window: f64) -> Result<CollapseRevivalReport> {
    if series.len() < 3 {
        return Err(Error::GridTooShort { need: 3, got: series.len() });
    }
    let span = series.span();
    if span < 3.0 * window {
        return Err(Error::InsufficientSpan { span, window, need: 3 });
    }
    let env = block_envelope(series, window);
    if env.len() < 3 {
        return Err(Error::InsufficientSpan { span, window, need: 3 });
    }
    let ts: Vec<f64> = env.iter().map(|e| e.t).collect();
    let hi: Vec<f64> = env.iter().map(|e| e.hi).collect();
    let lo: Vec<f64> = env.iter().map(|e| e.lo).collect();
    let peaks = find_peaks(&ts, &hi);
    if peaks.len() < 2 {
        return Err(Error::NoPeakFound);
    }
    let t_cr = (peaks[peaks.len() - 1].t - peaks[0].t) / (peaks.len() - 1) as f64;
    let widths: Vec<f64> = peaks.iter().filter_map(|p| p.width).collect();
    let t_r = if widths.is_empty() {
        // Only edge peaks: use twice the one-sided half width of the first.
        2.0 * half_width_from_edge(&ts, &hi)
    } else {
        widths.iter().sum::<f64>() / widths.len() as f64
    };
    let t0 = series.grid[0];
    let t_p = peaks.iter().map(|p| p.t).find(|&t| t > t0 + window).unwrap_or(peaks[0].t);
    let ext = |v: &[f64]| v.iter().fold((f64::MIN, f64::MAX), |(a, b), &x| (a.max(x), b.min(x)));
    let (max_p, min_p) = ext(&hi);
    let (max_m, min_m) = ext(&lo);
    let t_c = t_cr - t_r;
    Ok(CollapseRevivalReport {
        t_cr,
        t_p,
        delta: t_r / 2.0,
        t_r,
        t_c,
        ratio: t_c / t_r,
        h_plus: max_p - min_p,
        h_minus: max_m - min_m,
        max_gamma_plus: max_p,
        max_gamma_minus: max_m,
        min_gamma_plus: min_p,
        min_gamma_minus: min_m,
        w_value: None,
        exists: true,
        regime: None,
    })
}

fn half_width_from_edge(t: &[f64], y: &[f64]) -> f64 {
    let (ymax, ymin) = y.iter().fold((f64::MIN, f64::MAX), |(a, b), &v| (a.max(v), b.min(v)));
    let level = (ymax + ymin) / 2.0;
    let top = (0..y.len()).fold(0, |m, i| if y[i] > y[m] { i } else { m });
    let mut r = top;
    while r + 1 < y.len() && y[r + 1] >= level {
        r += 1;
    }
    if r + 1 < y.len() {
        cross(t[r], y[r], t[r + 1], y[r + 1], level) - t[top]
    } else {
        t[r] - t[top]
    }
}
