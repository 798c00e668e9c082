//! Browser bindings for the comparison demo in `www/`.
//!
//! Curves come back as flat `Float64Array`s of fixed-width rows so the page
//! can plot them without a serialization layer.

use cvclone::experiments::{compare, ComparisonRecord};
use cvclone::lcdt::omega_thresholds;
use cvclone::Result;
use wasm_bindgen::prelude::*;

/// Values per row of [`fidelity_curves`]: tau, telecloning, local cloning.
pub const CURVE_STRIDE: usize = 3;
/// Values per row of [`threshold_curve`]: tau, Omega threshold.
pub const THRESHOLD_STRIDE: usize = 2;

fn taus(tau_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(tau_max > 0.0 && tau_max.is_finite()) || points == 0 {
        return Err(cvclone::Error::Domain(format!(
            "need tau_max > 0 and at least one point, got {tau_max} and {points}"
        )));
    }
    Ok((1..=points)
        .map(|i| tau_max * i as f64 / points as f64)
        .collect())
}

pub fn fidelity_curves_native(
    m: usize,
    mu: f64,
    omega: f64,
    tau_max: f64,
    points: usize,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(points * CURVE_STRIDE);
    for tau in taus(tau_max, points)? {
        let r = compare(m, tau, mu, omega)?;
        out.extend([tau, r.f_tele, r.f_lcdt]);
    }
    Ok(out)
}

pub fn threshold_curve_native(m: usize, mu: f64, tau_max: f64, points: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(points * THRESHOLD_STRIDE);
    for tau in taus(tau_max, points)? {
        out.extend([tau, omega_thresholds(m, tau, mu)?.omega_sq.sqrt()]);
    }
    Ok(out)
}

fn js(e: cvclone::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Telecloning and local-cloning fidelities on `points` times up to `tau_max`.
#[wasm_bindgen(js_name = fidelityCurves)]
pub fn fidelity_curves(
    m: usize,
    mu: f64,
    omega: f64,
    tau_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    fidelity_curves_native(m, mu, omega, tau_max, points).map_err(js)
}

/// Alphabet width above which telecloning wins, on `points` times up to `tau_max`.
#[wasm_bindgen(js_name = thresholdCurve)]
pub fn threshold_curve(
    m: usize,
    mu: f64,
    tau_max: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    threshold_curve_native(m, mu, tau_max, points).map_err(js)
}

/// Optimal telecloning strategy at one point, with the local-cloning value.
#[wasm_bindgen]
pub struct Strategy {
    record: ComparisonRecord,
}

#[wasm_bindgen]
impl Strategy {
    #[wasm_bindgen(getter)]
    pub fn regime(&self) -> String {
        self.record.regime.to_string()
    }

    /// Support photons per receiver mode; `Infinity` when unbounded.
    #[wasm_bindgen(getter, js_name = nOpt)]
    pub fn n_opt(&self) -> f64 {
        self.record.n_opt.value()
    }

    #[wasm_bindgen(getter, js_name = tau0Opt)]
    pub fn tau0_opt(&self) -> f64 {
        self.record.tau0_opt
    }

    #[wasm_bindgen(getter, js_name = fTele)]
    pub fn f_tele(&self) -> f64 {
        self.record.f_tele
    }

    #[wasm_bindgen(getter, js_name = fLcdt)]
    pub fn f_lcdt(&self) -> f64 {
        self.record.f_lcdt
    }

    #[wasm_bindgen(getter)]
    pub fn winner(&self) -> String {
        self.record.winner.to_string()
    }
}

pub fn strategy_native(m: usize, tau: f64, mu: f64, omega: f64) -> Result<Strategy> {
    Ok(Strategy {
        record: compare(m, tau, mu, omega)?,
    })
}

#[wasm_bindgen]
pub fn strategy(m: usize, tau: f64, mu: f64, omega: f64) -> std::result::Result<Strategy, JsError> {
    strategy_native(m, tau, mu, omega).map_err(js)
}
