//! Exact reduced dynamics of the central spin.
//!
//! The Bloch vector obeys x = x₀X₁ + y₀X₂, y = y₀X₁ − x₀X₂, z = z₀Z₁ + Z₂,
//! with X₁, X₂, Z₁, Z₂ thermal sums over the invariant 2×2 blocks.

pub mod oracle;

use rayon::prelude::*;
use serde::Serialize;

use crate::model::{SubspaceSpectrum, ThermalWeights};
use crate::sum::Compensated;

pub use oracle::{full_hilbert_evolve, FullHilbertOracle};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn sub(&self, o: &BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn max_abs_diff(&self, o: &BlochVector) -> f64 {
        let d = self.sub(o);
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagatorSample {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub z1: f64,
    pub z2: f64,
}

/// Time derivatives of X₁, X₂, Z₁, Z₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagatorDerivative {
    pub dx1: f64,
    pub dx2: f64,
    pub dz1: f64,
    pub dz2: f64,
}

pub fn evolve_bloch(sample: &PropagatorSample, v0: &BlochVector) -> BlochVector {
    BlochVector {
        x: v0.x * sample.x1 + v0.y * sample.x2,
        y: v0.y * sample.x1 - v0.x * sample.x2,
        z: v0.z * sample.z1 + sample.z2,
    }
}

pub fn propagator_sample(spec: &SubspaceSpectrum, w: &ThermalWeights, t: f64) -> PropagatorSample {
    Propagator::new(spec, w).sample(t)
}

pub fn propagator_derivatives(
    spec: &SubspaceSpectrum,
    w: &ThermalWeights,
    t: f64,
) -> PropagatorDerivative {
    Propagator::new(spec, w).sample_with_derivative(t).1
}

/// Phasors are recomputed from scratch at every multiple of this index.
const ANCHOR: usize = 1024;
const CHUNK: usize = 4 * ANCHOR;

/// Precomputed block constants for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Propagator {
    f: Vec<f64>,
    gm: Vec<f64>,
    /// 4η²g² per block.
    kappa: Vec<f64>,
    w: Vec<f64>,
    omega_b: f64,
    exp_beta: f64,
}

#[derive(Default)]
struct Sums {
    a: Compensated,
    b: Compensated,
    c: Compensated,
}

impl Propagator {
    pub fn new(spec: &SubspaceSpectrum, w: &ThermalWeights) -> Self {
        let g = spec.params.g();
        Self {
            f: spec.blocks.iter().map(|b| b.f_m).collect(),
            gm: spec.blocks.iter().map(|b| b.g_m).collect(),
            kappa: spec.blocks.iter().map(|b| 4.0 * b.eta_m * b.eta_m * g * g).collect(),
            w: w.weights.clone(),
            omega_b: spec.params.omega_b(),
            exp_beta: w.beta.exp(),
        }
    }

    pub fn n_blocks(&self) -> usize {
        self.f.len()
    }

    /// cos(F t) and sin(F t)/F per block (sin(F t)/F → t at F = 0).
    fn trig(&self, t: f64, c: &mut [f64], s: &mut [f64]) {
        for (k, &f) in self.f.iter().enumerate() {
            if f > 0.0 {
                let (sn, cs) = (f * t).sin_cos();
                c[k] = cs;
                s[k] = sn / f;
            } else {
                c[k] = 1.0;
                s[k] = t;
            }
        }
    }

    fn accumulate(&self, c: &[f64], s: &[f64]) -> (f64, f64, f64) {
        let mut acc = Sums::default();
        for (k, &w) in self.w.iter().enumerate() {
            let (c0, c1, s0, s1) = (c[k], c[k + 1], s[k], s[k + 1]);
            let (g0, g1) = (self.gm[k], self.gm[k + 1]);
            acc.a.add(-w * (g1 * s1 * c0 + g0 * s0 * c1));
            acc.b.add(w * (c0 * c1 - g0 * g1 * s0 * s1));
            acc.c.add(w * self.kappa[k] * s0 * s0);
        }
        (acc.a.value(), acc.b.value(), acc.c.value())
    }

    fn accumulate_derivative(&self, c: &[f64], s: &[f64]) -> (f64, f64, f64) {
        let mut acc = Sums::default();
        for (k, &w) in self.w.iter().enumerate() {
            let (c0, c1, s0, s1) = (c[k], c[k + 1], s[k], s[k + 1]);
            let (g0, g1) = (self.gm[k], self.gm[k + 1]);
            let (f0, f1) = (self.f[k] * self.f[k], self.f[k + 1] * self.f[k + 1]);
            acc.a.add(w * (-(g0 + g1) * c0 * c1 + (g1 * f0 + g0 * f1) * s0 * s1));
            acc.b.add(-w * ((f0 + g0 * g1) * s0 * c1 + (f1 + g0 * g1) * c0 * s1));
            acc.c.add(2.0 * w * self.kappa[k] * s0 * c0);
        }
        (acc.a.value(), acc.b.value(), acc.c.value())
    }

    fn assemble(&self, t: f64, (sa, sb, sc): (f64, f64, f64)) -> PropagatorSample {
        let (sw, cw) = (self.omega_b * t).sin_cos();
        PropagatorSample {
            t,
            x1: sw * sa + cw * sb,
            x2: -(cw * sa - sw * sb),
            z1: 1.0 - (1.0 + self.exp_beta) * sc,
            z2: (self.exp_beta - 1.0) * sc,
        }
    }

    pub fn sample(&self, t: f64) -> PropagatorSample {
        let n = self.n_blocks();
        let (mut c, mut s) = (vec![0.0; n], vec![0.0; n]);
        self.trig(t, &mut c, &mut s);
        self.assemble(t, self.accumulate(&c, &s))
    }

    pub fn sample_with_derivative(&self, t: f64) -> (PropagatorSample, PropagatorDerivative) {
        let n = self.n_blocks();
        let (mut c, mut s) = (vec![0.0; n], vec![0.0; n]);
        self.trig(t, &mut c, &mut s);
        let sums = self.accumulate(&c, &s);
        let (da, db, dc) = self.accumulate_derivative(&c, &s);
        let (sa, sb, _) = sums;
        let (sw, cw) = (self.omega_b * t).sin_cos();
        let wb = self.omega_b;
        let d = PropagatorDerivative {
            dx1: wb * (cw * sa - sw * sb) + sw * da + cw * db,
            dx2: wb * (sw * sa + cw * sb) - cw * da + sw * db,
            dz1: -(1.0 + self.exp_beta) * dc,
            dz2: (self.exp_beta - 1.0) * dc,
        };
        (self.assemble(t, sums), d)
    }

    /// Samples at arbitrary times, evaluated in parallel.
    pub fn sample_times(&self, times: &[f64]) -> Vec<PropagatorSample> {
        times.par_iter().map(|&t| self.sample(t)).collect()
    }

    /// Samples at t0 + i·step, i < n, using a phasor recurrence between anchors.
    ///
    /// Anchors sit at fixed indices, so results do not depend on the thread count.
    pub fn sample_uniform(&self, t0: f64, step: f64, n: usize) -> Vec<PropagatorSample> {
        let chunks: Vec<usize> = (0..n.div_ceil(CHUNK)).collect();
        chunks
            .par_iter()
            .flat_map_iter(|&ci| {
                let lo = ci * CHUNK;
                let hi = (lo + CHUNK).min(n);
                self.uniform_range(t0, step, lo, hi)
            })
            .collect()
    }

    fn uniform_range(&self, t0: f64, step: f64, lo: usize, hi: usize) -> Vec<PropagatorSample> {
        let nb = self.n_blocks();
        let mut c = vec![0.0; nb];
        let mut s = vec![0.0; nb];
        // Phasor e^{iFt} and step rotation e^{iF·step}.
        let mut re = vec![0.0; nb];
        let mut im = vec![0.0; nb];
        let rot: Vec<(f64, f64)> = self.f.iter().map(|&f| (f * step).sin_cos()).collect();
        let mut out = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let t = t0 + i as f64 * step;
            if i == lo || i % ANCHOR == 0 {
                for (k, &f) in self.f.iter().enumerate() {
                    let (sn, cs) = (f * t).sin_cos();
                    re[k] = cs;
                    im[k] = sn;
                }
            } else {
                for k in 0..nb {
                    let (rs, rc) = rot[k];
                    let r = re[k] * rc - im[k] * rs;
                    im[k] = re[k] * rs + im[k] * rc;
                    re[k] = r;
                }
            }
            for k in 0..nb {
                let f = self.f[k];
                c[k] = re[k];
                s[k] = if f > 0.0 { im[k] / f } else { t };
            }
            out.push(self.assemble(t, self.accumulate(&c, &s)));
        }
        out
    }
}
