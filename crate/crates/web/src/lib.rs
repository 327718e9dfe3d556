//! Browser bindings. Each export is a thin wrapper over a plain function
//! of the same name without the `js_` prefix, so the logic runs natively
//! in tests.

use fatou_core::dynamics::{escape_field, Budgets, Window};
use fatou_core::gaps::{hypothesis_check, HypothesisOptions};
use fatou_core::growth::{
    growth_exponents, growth_profile, GridSpec, ModulusOptions, TypeThresholds, DEFAULT_TAIL_WINDOW,
};
use fatou_core::CoefficientSeries;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest field the page asks for; keeps a frame under a second or so.
pub const MAX_SIDE: usize = 512;

fn modulus() -> ModulusOptions {
    ModulusOptions {
        parallel: false,
        ..ModulusOptions::default()
    }
}

/// RGBA bytes of the escape field of `spec` over `re_min:re_max:im_min:im_max`.
pub fn render_field(
    spec: &str,
    window: &str,
    width: usize,
    height: usize,
    max_iter: u32,
) -> Result<Vec<u8>, String> {
    if width > MAX_SIDE || height > MAX_SIDE {
        return Err(format!("at most {MAX_SIDE} pixels per side"));
    }
    let f = CoefficientSeries::parse(spec).map_err(|e| e.to_string())?;
    let window = Window::parse(window).map_err(|e| e.to_string())?;
    let budgets = Budgets {
        max_iter,
        ..Budgets::default()
    };
    let field =
        escape_field(&f, &window, width, height, &budgets, false).map_err(|e| e.to_string())?;
    Ok(field.to_rgba())
}

#[derive(Serialize)]
struct Curve {
    function: String,
    log_r: Vec<f64>,
    log_max: Vec<Option<f64>>,
    log_min: Vec<Option<f64>>,
    rho: Option<f64>,
    lambda: Option<f64>,
    note: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// `log M`, `log L` and the order estimate along `grid`, as JSON.
pub fn growth_curve(spec: &str, grid: &str) -> Result<String, String> {
    let f = CoefficientSeries::parse(spec).map_err(|e| e.to_string())?;
    let grid = GridSpec::parse(grid).map_err(|e| e.to_string())?;
    let profile = growth_profile(&f, &grid, &modulus()).map_err(|e| e.to_string())?;
    let exps = growth_exponents(&profile, DEFAULT_TAIL_WINDOW, &TypeThresholds::default());
    let ok = |s: &&fatou_core::growth::GrowthSample| s.valid;
    let curve = Curve {
        function: profile.function.clone(),
        log_r: profile.samples.iter().map(|s| s.log_r).collect(),
        log_max: profile
            .samples
            .iter()
            .map(|s| Some(s).filter(ok).and_then(|s| finite(s.log_m)))
            .collect(),
        log_min: profile
            .samples
            .iter()
            .map(|s| Some(s).filter(ok).and_then(|s| finite(s.log_l)))
            .collect(),
        rho: exps.as_ref().ok().map(|e| e.rho),
        lambda: exps.as_ref().ok().map(|e| e.lambda),
        note: exps.err().map(|e| e.to_string()),
    };
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

/// Running logarithmic density of `{log L <= (1 - eps) log M}` along `grid`.
pub fn hypothesis_density(spec: &str, epsilon: f64, grid: &str) -> Result<Vec<f64>, String> {
    let f = CoefficientSeries::parse(spec).map_err(|e| e.to_string())?;
    let grid = GridSpec::parse(grid).map_err(|e| e.to_string())?;
    let report = hypothesis_check(
        &f,
        epsilon,
        &grid,
        &modulus(),
        &HypothesisOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    Ok(report.log_density)
}

#[wasm_bindgen(js_name = renderField)]
pub fn js_render_field(
    spec: &str,
    window: &str,
    width: usize,
    height: usize,
    max_iter: u32,
) -> Result<Vec<u8>, JsError> {
    render_field(spec, window, width, height, max_iter).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = growthCurve)]
pub fn js_growth_curve(spec: &str, grid: &str) -> Result<String, JsError> {
    growth_curve(spec, grid).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hypothesisDensity)]
pub fn js_hypothesis_density(spec: &str, epsilon: f64, grid: &str) -> Result<Vec<f64>, JsError> {
    hypothesis_density(spec, epsilon, grid).map_err(|e| JsError::new(&e))
}
