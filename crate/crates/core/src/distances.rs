//! Trace distances between evolved state pairs, the information-flow rate σ
//! and the rise-sum (BLP) measure on a finite window.

use serde::Serialize;

use crate::dynamics::{BlochVector, PropagatorSample};
use crate::error::{Error, Result};

/// Consecutive values closer than this count as a plateau.
pub const PLATEAU_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCoefficients {
    pub alpha_x: f64,
    pub alpha_z: f64,
    /// Initial Bloch vectors, when the pair was built from them.
    pub states: Option<(BlochVector, BlochVector)>,
}

impl PairCoefficients {
    pub fn from_states(v1: BlochVector, v2: BlochVector) -> Self {
        let d = v1.sub(&v2);
        Self { alpha_x: d.x * d.x + d.y * d.y, alpha_z: d.z * d.z, states: Some((v1, v2)) }
    }

    pub fn from_alphas(alpha_x: f64, alpha_z: f64) -> Result<Self> {
        if !(alpha_x >= 0.0 && alpha_z >= 0.0 && alpha_x + alpha_z <= 4.0 + 1e-9) {
            return Err(Error::InvalidParams(format!(
                "pair coefficients need α_x, α_z ≥ 0 and α_x + α_z ≤ 4, got ({alpha_x}, {alpha_z})"
            )));
        }
        Ok(Self { alpha_x, alpha_z, states: None })
    }

    /// Orthogonal pair (0,0,±1).
    pub fn z_pair() -> Self {
        Self::from_states(BlochVector::new(0.0, 0.0, 1.0), BlochVector::new(0.0, 0.0, -1.0))
    }

    /// Orthogonal pair (±1,0,0).
    pub fn x_pair() -> Self {
        Self::from_states(BlochVector::new(1.0, 0.0, 0.0), BlochVector::new(-1.0, 0.0, 0.0))
    }
}

pub fn distance_z(sample: &PropagatorSample) -> f64 {
    sample.z1.abs()
}

pub fn distance_x(sample: &PropagatorSample) -> f64 {
    sample.x1.hypot(sample.x2)
}

pub fn distance_general(sample: &PropagatorSample, pc: &PairCoefficients) -> f64 {
    let dz2 = sample.z1 * sample.z1;
    let dx2 = sample.x1 * sample.x1 + sample.x2 * sample.x2;
    0.5 * (pc.alpha_z * dz2 + pc.alpha_x * dx2).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceSeries {
    pub grid: Vec<f64>,
    pub d_values: Vec<f64>,
    /// Empty until [`sigma_series`] fills it.
    pub sigma_values: Vec<f64>,
}

impl DistanceSeries {
    pub fn new(grid: Vec<f64>, d_values: Vec<f64>) -> Result<Self> {
        if grid.len() != d_values.len() {
            return Err(Error::InvalidParams(format!(
                "grid has {} points but {} values",
                grid.len(),
                d_values.len()
            )));
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::GridNotIncreasing(i + 1));
        }
        Ok(Self { grid, d_values, sigma_values: Vec::new() })
    }

    pub fn from_samples(samples: &[PropagatorSample], pc: &PairCoefficients) -> Result<Self> {
        Self::new(
            samples.iter().map(|s| s.t).collect(),
            samples.iter().map(|s| distance_general(s, pc)).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn span(&self) -> f64 {
        match (self.grid.first(), self.grid.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }
}

/// Three-point derivative at `x[i]` from samples at indices `j`, `k`, `l`.
fn lagrange_derivative(x: &[f64], y: &[f64], at: usize, [j, k, l]: [usize; 3]) -> f64 {
    let t = x[at];
    let term = |a: usize, b: usize, c: usize| {
        y[a] * ((t - x[b]) + (t - x[c])) / ((x[a] - x[b]) * (x[a] - x[c]))
    };
    term(j, k, l) + term(k, j, l) + term(l, j, k)
}

/// σ(t) = dD/dt by central differences inside and second-order one-sided differences at the ends.
pub fn sigma_series(series: &DistanceSeries) -> Result<DistanceSeries> {
    let n = series.len();
    if n < 3 {
        return Err(Error::GridTooShort { need: 3, got: n });
    }
    let (x, y) = (&series.grid, &series.d_values);
    let sigma = (0..n)
        .map(|i| match i {
            0 => lagrange_derivative(x, y, 0, [0, 1, 2]),
            _ if i == n - 1 => lagrange_derivative(x, y, i, [n - 3, n - 2, n - 1]),
            _ => lagrange_derivative(x, y, i, [i - 1, i, i + 1]),
        })
        .collect();
    Ok(DistanceSeries { grid: series.grid.clone(), d_values: series.d_values.clone(), sigma_values: sigma })
}

/// Σ over maximal increasing runs of D(run end) − D(run start).
pub fn blp_measure_windowed(series: &DistanceSeries) -> f64 {
    let d = &series.d_values;
    let mut total = 0.0;
    let mut i = 0;
    while i + 1 < d.len() {
        if d[i + 1] - d[i] > PLATEAU_TOL {
            let start = i;
            while i + 1 < d.len() && d[i + 1] - d[i] > PLATEAU_TOL {
                i += 1;
            }
            total += d[i] - d[start];
        } else {
            i += 1;
        }
    }
    total
}

/// Windowed measure normalized to one window of length `period`.
pub fn blp_measure_per_period(series: &DistanceSeries, period: f64) -> f64 {
    let span = series.span();
    if span > 0.0 {
        blp_measure_windowed(series) * period / span
    } else {
        0.0
    }
}
