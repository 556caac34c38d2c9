//! Browser bindings: p-value curves, quantile plots and null p-values for
//! the bivariate λ-family, rendered as SVG strings.

use gpctest::harness::{
    default_curve_grid, p_values_at, pvalue_curve, quantile_plot_points, render_pvalue_curve, render_quantile_plot,
    run_replicated_test, ExperimentConfig, ModelSpec, PlotStyle,
};
use gpctest::rng::substream;
use gpctest::{CopulaModel, Subset, WeightedChiSquareLaw};
use wasm_bindgen::prelude::*;

fn js_err(e: gpctest::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

pub fn curve_svg(lambda: f64, n: usize, k: usize, seed: u32) -> gpctest::Result<String> {
    let model = ModelSpec::Copula(CopulaModel::lemma_one(lambda)?);
    let dataset = model.generate(n, &Subset::Full, &mut substream(u64::from(seed), 0))?;
    let curve = pvalue_curve(&dataset, &default_curve_grid(), k)?;
    let style = PlotStyle { title: format!("lambda = {lambda}, n = {n}, k = {k}"), ..PlotStyle::default() };
    Ok(render_pvalue_curve(&curve, &style))
}

pub fn quantile_svg(lambda: f64, n: usize, c: f64, k: usize, reps: usize, seed: u32) -> gpctest::Result<String> {
    let config = ExperimentConfig {
        model: ModelSpec::Copula(CopulaModel::lemma_one(lambda)?),
        n,
        thresholds: vec![c],
        k,
        replications: reps,
        subset: Subset::Full,
        seed: u64::from(seed),
        output: None,
    };
    let reports = run_replicated_test(&config)?;
    let points = quantile_plot_points(&p_values_at(&reports, c));
    let style = PlotStyle { title: format!("lambda = {lambda}, c = {c}, {reps} runs"), width: 400.0, height: 400.0 };
    Ok(render_quantile_plot(&points, &style))
}

/// P-value of one simulated dataset as a function of `c` on the default grid.
#[wasm_bindgen]
pub fn pvalue_curve_svg(lambda: f64, n: usize, k: usize, seed: u32) -> Result<String, JsValue> {
    curve_svg(lambda, n, k, seed).map_err(js_err)
}

/// Sorted p-values of `reps` independent datasets against uniform quantiles.
#[wasm_bindgen]
pub fn quantile_plot_svg(lambda: f64, n: usize, c: f64, k: usize, reps: usize, seed: u32) -> Result<String, JsValue> {
    quantile_svg(lambda, n, c, k, reps, seed).map_err(js_err)
}

/// `P(Q > t)` under the null law with `k` counts.
#[wasm_bindgen]
pub fn null_p_value(k: usize, t: f64) -> Result<f64, JsValue> {
    WeightedChiSquareLaw::null(k).and_then(|law| law.p_value(t)).map_err(js_err)
}
