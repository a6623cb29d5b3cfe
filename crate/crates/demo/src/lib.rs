//! Browser demo. Each export returns JSON that `www/main.js` draws on a canvas.

use cams_core::{
    crossover, execute, modified_cost, revolve_cost, unit_cost, CamsTables, CheckpointType, CountingEngine,
    Policy, SchemeInfo, Variant,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_STEPS: usize = 2000;
const MAX_UNITS: usize = 200;

fn check(m: usize, units: usize) -> Result<(), String> {
    if m == 0 || m > MAX_STEPS || units == 0 || units > MAX_UNITS {
        return Err(format!("need 1 <= steps <= {MAX_STEPS} and 1 <= units <= {MAX_UNITS}"));
    }
    Ok(())
}

/// Recomputations of the four algorithms for every m in 1..=max_m.
pub fn cost_curves_json(max_m: usize, units: usize, stages: usize) -> Result<String, String> {
    check(max_m, units)?;
    let g = SchemeInfo::new(stages, false).map_err(|e| e.to_string())?;
    let sa = SchemeInfo::new(stages, true).map_err(|e| e.to_string())?;
    let gen = CamsTables::build(max_m, units, g, Variant::Gen).map_err(|e| e.to_string())?;
    let csa = CamsTables::build(max_m, units, sa, Variant::Sa).map_err(|e| e.to_string())?;
    let c = unit_cost(CheckpointType::SolutionWithStages, &g);
    let steps: Vec<usize> = (1..=max_m).collect();
    let series = |f: &dyn Fn(usize) -> Option<u64>| steps.iter().map(|&m| f(m)).collect::<Vec<_>>();
    let v = json!({
        "steps": steps,
        "units": units,
        "stages": stages,
        "series": {
            "revolve": series(&|m| revolve_cost(m, units).ok()),
            "mrevolve": series(&|m| (units >= c).then(|| modified_cost(m, units / c).ok()).flatten()),
            "cams-sa": series(&|m| csa.total(m, units)),
            "cams-gen": series(&|m| gen.total(m, units)),
        }
    });
    Ok(v.to_string())
}

/// The schedule of one policy plus its replayed metrics.
pub fn schedule_json(
    m: usize,
    units: usize,
    stages: usize,
    stiffly_accurate: bool,
    policy: &str,
) -> Result<String, String> {
    check(m, units)?;
    let scheme = SchemeInfo::new(stages, stiffly_accurate).map_err(|e| e.to_string())?;
    let policy: Policy = policy.parse().map_err(|e: cams_core::Error| e.to_string())?;
    let s = policy.schedule(m, units, &scheme).map_err(|e| e.to_string())?;
    let metrics = execute(&s, CountingEngine::default()).map_err(|e| e.to_string())?;
    let schedule: Value = serde_json::from_str(&s.to_json()).map_err(|e| e.to_string())?;
    Ok(json!({ "schedule": schedule, "metrics": metrics, "text": s.to_text() }).to_string())
}

/// Crossover for `units` and `extra_stages`, with both cost curves up to a
/// little past it.
pub fn crossover_json(units: usize, extra_stages: usize) -> Result<String, String> {
    let c = unit_cost(CheckpointType::SolutionWithStages, &SchemeInfo::general(extra_stages + 1));
    let at = crossover(units, c, 100_000).map_err(|e| e.to_string())?;
    let end = at.map_or(200, |m| (m + m / 2).max(10));
    let steps: Vec<usize> = (1..=end).collect();
    let classical: Vec<u64> = steps.iter().map(|&m| revolve_cost(m, units).unwrap_or(0)).collect();
    let modified: Vec<u64> = steps.iter().map(|&m| modified_cost(m, units / c).unwrap_or(0)).collect();
    Ok(json!({
        "units": units,
        "checkpoint_units": c,
        "crossover": at,
        "steps": steps,
        "classical": classical,
        "modified": modified,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn cost_curves(max_m: usize, units: usize, stages: usize) -> Result<String, JsError> {
    cost_curves_json(max_m, units, stages).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn schedule_timeline(
    m: usize,
    units: usize,
    stages: usize,
    stiffly_accurate: bool,
    policy: &str,
) -> Result<String, JsError> {
    schedule_json(m, units, stages, stiffly_accurate, policy).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn crossover_curves(units: usize, extra_stages: usize) -> Result<String, JsError> {
    crossover_json(units, extra_stages).map_err(|e| JsError::new(&e))
}
