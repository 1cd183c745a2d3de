//! Brute-force reference: the full 2^{N+1}-dimensional Hamiltonian.
//!
//! Qubit state |1⟩ is spin up. The central spin is the most significant bit.
//! The bath starts in the Dicke-sector thermal mixture Σ_M p_M |J,M⟩⟨J,M|.
//! Each pure component is propagated through the dense eigendecomposition and
//! the bath is traced out explicitly.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::BlochVector;
use crate::error::{Error, Result};
use crate::model::{thermal_weights, ModelParams};

pub const MAX_ORACLE_BATH: u32 = 12;

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

pub fn density_from_bloch(v: &BlochVector) -> Mat2 {
    let c = Complex64::new;
    [[c((1.0 + v.z) / 2.0, 0.0), c(v.x / 2.0, -v.y / 2.0)], [c(v.x / 2.0, v.y / 2.0), c((1.0 - v.z) / 2.0, 0.0)]]
}

pub fn bloch_from_density(r: &Mat2) -> BlochVector {
    BlochVector::new(2.0 * r[0][1].re, -2.0 * r[0][1].im, (r[0][0] - r[1][1]).re)
}

/// ½ Tr|ρ₁ − ρ₂| from the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &Mat2, b: &Mat2) -> f64 {
    let d00 = (a[0][0] - b[0][0]).re;
    let d11 = (a[1][1] - b[1][1]).re;
    let d01 = a[0][1] - b[0][1];
    let mean = (d00 + d11) / 2.0;
    let rad = (((d00 - d11) / 2.0).powi(2) + d01.norm_sqr()).sqrt();
    ((mean + rad).abs() + (mean - rad).abs()) / 2.0
}

pub struct FullHilbertOracle {
    n: usize,
    eigvals: DVector<f64>,
    eigvecs: DMatrix<f64>,
    /// Per Dicke component: thermal weight and eigenbasis coordinates of |s⟩|J,M⟩ for s = 0, 1.
    components: Vec<(f64, [DVector<f64>; 2])>,
}

impl FullHilbertOracle {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let nb = params.n_bath();
        if nb > MAX_ORACLE_BATH {
            return Err(Error::DimensionTooLarge { n: nb, max: MAX_ORACLE_BATH });
        }
        let n = nb as usize;
        let h = hamiltonian(params);
        let eig = SymmetricEigen::new(h);
        let bath_dim = 1usize << n;
        let w = thermal_weights(params);
        let components = (0..=n)
            .map(|ones| {
                let norm = (binomial(n, ones)).sqrt().recip();
                let mk = |s: usize| {
                    let mut psi = DVector::zeros(2 * bath_dim);
                    for b in 0..bath_dim {
                        if b.count_ones() as usize == ones {
                            psi[s * bath_dim + b] = norm;
                        }
                    }
                    eig.eigenvectors.tr_mul(&psi)
                };
                (w.weights[ones], [mk(0), mk(1)])
            })
            .collect();
        Ok(Self { n, eigvals: eig.eigenvalues, eigvecs: eig.eigenvectors, components })
    }

    /// Reduced map at time t: `map[s][s2][a][b]` is the coefficient of ρ_{s,s2}(0) in ρ_{a,b}(t).
    pub fn reduced_map(&self, t: f64) -> [[Mat2; 2]; 2] {
        let bath_dim = 1usize << self.n;
        let zero = Complex64::new(0.0, 0.0);
        let mut map = [[[[zero; 2]; 2]; 2]; 2];
        let cs = self.eigvals.map(|l| (l * t).cos());
        let sn = self.eigvals.map(|l| (l * t).sin());
        for (p, coords) in &self.components {
            if *p == 0.0 {
                continue;
            }
            let psi: Vec<(DVector<f64>, DVector<f64>)> = coords
                .iter()
                .map(|a| {
                    (&self.eigvecs * a.component_mul(&cs), -(&self.eigvecs * a.component_mul(&sn)))
                })
                .collect();
            for s in 0..2 {
                for s2 in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut acc = zero;
                            for k in 0..bath_dim {
                                let u = Complex64::new(psi[s].0[a * bath_dim + k], psi[s].1[a * bath_dim + k]);
                                let v = Complex64::new(psi[s2].0[b * bath_dim + k], psi[s2].1[b * bath_dim + k]);
                                acc += u * v.conj();
                            }
                            map[s][s2][a][b] += acc * *p;
                        }
                    }
                }
            }
        }
        map
    }

    pub fn reduced_state(&self, rho0: &Mat2, t: f64) -> Mat2 {
        apply_map(&self.reduced_map(t), rho0)
    }

    pub fn evolve(&self, v0: &BlochVector, t: f64) -> BlochVector {
        bloch_from_density(&self.reduced_state(&density_from_bloch(v0), t))
    }
}

pub fn apply_map(map: &[[Mat2; 2]; 2], rho0: &Mat2) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 2]; 2];
    for s in 0..2 {
        for s2 in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    out[a][b] += rho0[s][s2] * map[s][s2][a][b];
                }
            }
        }
    }
    out
}

pub fn full_hilbert_evolve(params: &ModelParams, v0: &BlochVector, t: f64) -> Result<BlochVector> {
    Ok(FullHilbertOracle::new(params)?.evolve(v0, t))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Physical Pauli action on one qubit bit: σz|b⟩ = (2b−1)|b⟩, σx flips, σy = −Y.
/// Products σ^a_i σ^a_j appear only in pairs, so σy enters as Y⊗Y and H is real.
fn hamiltonian(params: &ModelParams) -> DMatrix<f64> {
    let n = params.n_bath() as usize;
    let dim = 1usize << (n + 1);
    let sys = n;
    let (ws, wb, g) = (params.omega_s(), params.omega_b(), params.g());
    let z = |state: usize, q: usize| if state >> q & 1 == 1 { 1.0 } else { -1.0 };
    let mut h = DMatrix::zeros(dim, dim);
    for st in 0..dim {
        let mut diag = ws / 2.0 * z(st, sys);
        for q in 0..n {
            diag += wb / 2.0 * z(st, q) + g * z(st, sys) * z(st, q);
        }
        h[(st, st)] += diag;
        for q in 0..n {
            let flipped = st ^ (1 << sys) ^ (1 << q);
            // σxσx gives 1; YY gives −1 for equal bits and +1 for opposite bits.
            let yy = if (st >> sys & 1) == (st >> q & 1) { -1.0 } else { 1.0 };
            h[(flipped, st)] += g * (1.0 + yy);
        }
    }
    h
}
