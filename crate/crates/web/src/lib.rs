//! wasm-bindgen front end for the static page in `www/`.

use serde_json::json;
use spinstar::asymptotics::{coefficients, Asymptotics};
use spinstar::distances::distance_general;
use spinstar::timescales::{fwhm_analytic, period};
use spinstar::{compute_spectrum, thermal_weights, BlochVector, ModelParams, PairCoefficients, Propagator};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn grid(t0: f64, t1: f64, points: usize) -> Vec<f64> {
    let step = if points > 1 { (t1 - t0) / (points - 1) as f64 } else { 0.0 };
    (0..points).map(|i| t0 + step * i as f64).collect()
}

#[wasm_bindgen]
pub struct Scenario {
    params: ModelParams,
    prop: Propagator,
}

#[wasm_bindgen]
impl Scenario {
    #[wasm_bindgen(constructor)]
    pub fn new(n_bath: u32, g: f64, omega_s: f64, omega_b: f64, t_bath: f64) -> Result<Scenario, JsError> {
        Self::build(n_bath, g, omega_s, omega_b, t_bath).map_err(js_err)
    }

    /// Exact trace distance of two Bloch vectors on a uniform grid.
    pub fn distance(&self, v1: &[f64], v2: &[f64], t0: f64, t1: f64, points: usize) -> Result<Vec<f64>, JsError> {
        let (a, b) = match (v1, v2) {
            ([x1, y1, z1], [x2, y2, z2]) => (BlochVector::new(*x1, *y1, *z1), BlochVector::new(*x2, *y2, *z2)),
            _ => return Err(JsError::new("Bloch vectors need three components")),
        };
        if a.norm() > 1.0 + 1e-9 || b.norm() > 1.0 + 1e-9 {
            return Err(JsError::new("Bloch vector outside the unit ball"));
        }
        Ok(self.distances(&PairCoefficients::from_states(a, b), t0, t1, points))
    }

    /// Upper then lower envelope of the `z` or `x` pair, concatenated.
    pub fn envelope(&self, which: &str, t0: f64, t1: f64, points: usize) -> Result<Vec<f64>, JsError> {
        self.envelope_bounds(which, t0, t1, points)
    }

    /// Period, revival width and collapse time as a JSON string.
    pub fn timescales(&self) -> Result<String, JsError> {
        self.timescales_json().map_err(js_err)
    }
}

impl Scenario {
    fn build(n_bath: u32, g: f64, omega_s: f64, omega_b: f64, t_bath: f64) -> spinstar::Result<Self> {
        let params = ModelParams::new(n_bath, g, omega_s, omega_b, t_bath)?;
        let prop = Propagator::new(&compute_spectrum(&params), &thermal_weights(&params));
        Ok(Self { params, prop })
    }

    fn distances(&self, pc: &PairCoefficients, t0: f64, t1: f64, points: usize) -> Vec<f64> {
        grid(t0, t1, points).into_iter().map(|t| distance_general(&self.prop.sample(t), pc)).collect()
    }

    fn envelope_bounds(&self, which: &str, t0: f64, t1: f64, points: usize) -> Result<Vec<f64>, JsError> {
        let a = Asymptotics::new(&self.params).map_err(js_err)?;
        let ts = grid(t0, t1, points);
        let samples = match which {
            "z" => ts.iter().map(|&t| a.envelope_z(t)).collect::<Vec<_>>(),
            "x" => ts.iter().map(|&t| a.envelope_x(t)).collect::<Result<_, _>>().map_err(js_err)?,
            _ => return Err(JsError::new("pair must be `z` or `x`")),
        };
        Ok(samples.iter().map(|e| e.upper).chain(samples.iter().map(|e| e.lower)).collect())
    }

    fn timescales_json(&self) -> spinstar::Result<String> {
        let c = coefficients(&self.params)?;
        let p = period(&self.params, &c);
        let cr = fwhm_analytic(&self.params, &c, &PairCoefficients::x_pair(), 1).ok();
        Ok(json!({
            "nu0": c.nu0,
            "nu_cr": c.nu_cr,
            "expansion_valid": c.validity_ok,
            "period": p,
            "collapse_revival": cr,
        })
        .to_string())
    }
}
