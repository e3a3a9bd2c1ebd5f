//! Browser bindings. Every entry point takes a scenario JSON document (the
//! same schema the command-line tool reads) and returns a JSON string.

use fracebola::analysis::r0_closed_form;
use fracebola::control::{compare_strategies, Strategy};
use fracebola::integrators::Trajectory;
use fracebola::model::{ControlledModel, EbolaModel, State8, DIM};
use fracebola::scenario::{self, ScenarioConfig, StrategyChoice};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Points per curve handed to the page.
pub const PLOT_POINTS: usize = 301;

fn config(text: &str) -> Result<ScenarioConfig, String> {
    let text = if text.trim().is_empty() { "{}" } else { text };
    ScenarioConfig::from_json(text).map_err(|e| e.to_string())
}

fn grid(t_final: f64) -> Vec<f64> {
    (0..PLOT_POINTS)
        .map(|i| t_final * i as f64 / (PLOT_POINTS - 1) as f64)
        .collect()
}

fn columns(tr: &Trajectory<DIM>, times: &[f64]) -> Vec<Vec<f64>> {
    let rows = tr.resample(times);
    (0..DIM)
        .map(|k| rows.iter().map(|y| y[k]).collect())
        .collect()
}

pub fn simulate_json(text: &str) -> Result<String, String> {
    let cfg = config(text)?;
    let p = cfg.params;
    let y0 = cfg.initial_state().to_array();
    let solver = cfg.solver();
    let tr = match cfg.strategy {
        StrategyChoice::Fixed { controls } => {
            let sys = ControlledModel {
                params: p,
                bounds: cfg.bounds,
                control: move |_t: f64| controls,
            };
            solver.solve(&sys, y0, 0.0, cfg.horizon, p.alpha)
        }
        _ => solver.solve(&EbolaModel { params: p }, y0, 0.0, cfg.horizon, p.alpha),
    }
    .map_err(|e| e.to_string())?;
    let times = grid(cfg.horizon);
    let peak = tr
        .states
        .iter()
        .map(|y| State8::from_array(*y).infected())
        .fold(0.0, f64::max);
    Ok(json!({
        "r0": r0_closed_form(&p),
        "times": times,
        "states": columns(&tr, &times),
        "names": fracebola::model::COMPARTMENTS,
        "peak_infected": peak,
        "accepted": tr.accepted,
    })
    .to_string())
}

pub fn analyze_json(text: &str) -> Result<String, String> {
    let cfg = config(text)?;
    let out = scenario::analyze(&cfg).map_err(|e| e.to_string())?;
    Ok(out
        .get("analysis.json")
        .expect("analyze always reports")
        .contents
        .clone())
}

pub fn strategies_json(text: &str) -> Result<String, String> {
    let cfg = config(text)?;
    let cmp = compare_strategies(
        &cfg.params,
        &Strategy::standard(),
        &cfg.bounds,
        &cfg.initial_state(),
        cfg.horizon,
        &cfg.solver(),
        &cfg.weights,
    )
    .map_err(|e| e.to_string())?;
    let times = grid(cfg.horizon);
    let rows: Vec<_> = cmp
        .outcomes
        .iter()
        .map(|o| {
            let infected: Vec<f64> = o
                .trajectory
                .resample(&times)
                .iter()
                .map(|y| State8::from_array(*y).infected())
                .collect();
            json!({
                "name": o.name,
                "controls": o.controls,
                "summary": o.summary,
                "mortality_reduction_pct": o.mortality_reduction_pct,
                "infected": infected,
            })
        })
        .collect();
    Ok(json!({
        "baseline_deaths": cmp.baseline_deaths,
        "times": times,
        "strategies": rows,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn simulate(config: &str) -> Result<String, JsValue> {
    simulate_json(config).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn analyze(config: &str) -> Result<String, JsValue> {
    analyze_json(config).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn strategies(config: &str) -> Result<String, JsValue> {
    strategies_json(config).map_err(|e| JsValue::from_str(&e))
}
