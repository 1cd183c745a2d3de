//! Physical parameters, invariant-subspace spectra and thermal bath weights.

use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of the spin-star model (ħ = k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n_bath: u32,
    g: f64,
    omega_s: f64,
    omega_b: f64,
    t_bath: f64,
    delta: f64,
}

impl ModelParams {
    pub fn new(n_bath: u32, g: f64, omega_s: f64, omega_b: f64, t_bath: f64) -> Result<Self> {
        if n_bath < 1 {
            return Err(Error::InvalidParams("n_bath must be at least 1".into()));
        }
        for (name, v) in [("g", g), ("omega_s", omega_s), ("omega_b", omega_b), ("t_bath", t_bath)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if omega_b == 0.0 {
            return Err(Error::InvalidParams("omega_b must be nonzero".into()));
        }
        if t_bath <= 0.0 {
            return Err(Error::InvalidParams(format!("t_bath must be positive, got {t_bath}")));
        }
        Ok(Self { n_bath, g, omega_s, omega_b, t_bath, delta: omega_s - omega_b })
    }

    pub fn n_bath(&self) -> u32 {
        self.n_bath
    }

    pub fn n(&self) -> f64 {
        self.n_bath as f64
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn t_bath(&self) -> f64 {
        self.t_bath
    }

    /// Detuning Δ = ω_s − ω_b.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Total bath spin J = N/2.
    pub fn j_total(&self) -> f64 {
        self.n() / 2.0
    }

    /// β = ω_b / T.
    pub fn beta(&self) -> f64 {
        self.omega_b / self.t_bath
    }

    pub fn with_n_bath(&self, n_bath: u32) -> Result<Self> {
        Self::new(n_bath, self.g, self.omega_s, self.omega_b, self.t_bath)
    }

    pub fn with_t_bath(&self, t_bath: f64) -> Result<Self> {
        Self::new(self.n_bath, self.g, self.omega_s, self.omega_b, t_bath)
    }
}

/// Sign of g with sgn(0) = +1.
pub fn sgn_g(g: f64) -> f64 {
    if g < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Spectral data of one 2×2 block spanned by |0⟩|J,M⟩ and |1⟩|J,M−1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Block {
    pub twice_m: i64,
    pub e_m: f64,
    pub g_m: f64,
    pub eta_m: f64,
    pub f_m: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

impl Block {
    pub fn m(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    /// Block Hamiltonian in the basis (|0⟩|J,M⟩, |1⟩|J,M−1⟩).
    pub fn matrix(&self, g: f64) -> [[f64; 2]; 2] {
        let off = 2.0 * g * self.eta_m;
        [[self.e_m - self.g_m, off], [off, self.e_m + self.g_m]]
    }

    /// K_M = c₊d₋ − c₋d₊.
    pub fn k_m(&self) -> f64 {
        self.c_plus * self.d_minus - self.c_minus * self.d_plus
    }
}

/// Per-M spectra for M = −J, …, J+1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceSpectrum {
    pub params: ModelParams,
    pub blocks: Vec<Block>,
}

impl SubspaceSpectrum {
    /// Block for M = −J + k.
    pub fn block(&self, k: usize) -> &Block {
        &self.blocks[k]
    }

    pub fn by_twice_m(&self, twice_m: i64) -> Option<&Block> {
        let k = twice_m + self.params.n_bath as i64;
        if k < 0 || k % 2 != 0 {
            return None;
        }
        self.blocks.get((k / 2) as usize)
    }

    /// Energy of the decoupled state |0⟩|J,−J⟩.
    pub fn edge_lower(&self) -> f64 {
        let b = &self.blocks[0];
        b.e_m - b.g_m
    }

    /// Energy of the decoupled state |1⟩|J,J⟩.
    pub fn edge_upper(&self) -> f64 {
        let b = self.blocks.last().expect("spectrum has N+2 blocks");
        b.e_m + b.g_m
    }
}

pub fn compute_spectrum(params: &ModelParams) -> SubspaceSpectrum {
    let n = params.n_bath as i64;
    let g = params.g;
    let sg = sgn_g(g);
    let blocks = (0..=n + 1)
        .map(|k| {
            let twice_m = 2 * k - n;
            let e_m = -g + (twice_m - 1) as f64 * params.omega_b / 2.0;
            let g_m = (twice_m - 1) as f64 * g + params.delta / 2.0;
            let eta2 = ((n - twice_m + 2) * (n + twice_m)) as f64 / 4.0;
            let coupling2 = 4.0 * eta2 * g * g;
            let f_m = (g_m * g_m + coupling2).sqrt();
            let (d_plus, d_minus) = if f_m > 0.0 {
                // (F ∓ G) written without cancellation.
                let (fp, fm) = if g_m >= 0.0 {
                    (f_m + g_m, coupling2 / (f_m + g_m))
                } else {
                    (coupling2 / (f_m - g_m), f_m - g_m)
                };
                ((fp / (2.0 * f_m)).sqrt(), (fm / (2.0 * f_m)).sqrt())
            } else {
                (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
            };
            Block {
                twice_m,
                e_m,
                g_m,
                eta_m: eta2.sqrt(),
                f_m,
                lambda_plus: e_m + f_m,
                lambda_minus: e_m - f_m,
                c_plus: sg * d_minus,
                c_minus: -sg * d_plus,
                d_plus,
                d_minus,
            }
        })
        .collect();
    SubspaceSpectrum { params: *params, blocks }
}

/// Thermal populations of the Dicke states |J,M⟩, M = −J..J.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalWeights {
    pub weights: Vec<f64>,
    /// Partition function; may be `inf` when it overflows, `ln_q` stays finite.
    pub q_value: f64,
    pub ln_q: f64,
    pub beta: f64,
}

impl ThermalWeights {
    /// exp(β) = weights[M] / weights[M+1].
    pub fn ratio(&self) -> f64 {
        self.beta.exp()
    }
}

pub fn thermal_weights(params: &ModelParams) -> ThermalWeights {
    let n = params.n_bath as usize;
    let beta = params.beta();
    let b = beta.abs();
    // Shifted so the largest weight is exp(0).
    let raw: Vec<f64> = (0..=n)
        .map(|k| {
            let steps = if beta >= 0.0 { k } else { n - k };
            (-(steps as f64) * b).exp()
        })
        .collect();
    let total = crate::sum::compensated_sum(raw.iter().copied());
    let weights = raw.iter().map(|w| w / total).collect();
    let ln_q = params.j_total() * b + ln_geometric(b, n as f64 + 1.0);
    ThermalWeights { weights, q_value: ln_q.exp(), ln_q, beta }
}

/// ln Σ_{k=0}^{m−1} e^{−kb} for b ≥ 0.
fn ln_geometric(b: f64, m: f64) -> f64 {
    if b == 0.0 {
        m.ln()
    } else {
        (-(-m * b).exp_m1()).ln() - (-(-b).exp_m1()).ln()
    }
}
