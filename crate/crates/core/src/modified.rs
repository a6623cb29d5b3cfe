//! Revolve with every checkpoint shifted one step later to include that
//! step's stages, saving one forward step per reversal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::executor::Policy;
use crate::revolve::{binomial, repetition_number, revolve_cost};
use crate::schedule::Schedule;
use crate::units::{unit_cost, CheckpointType, SchemeInfo};

/// Minimal recomputations with `s` combined (solution plus stages) checkpoints.
pub fn modified_cost(m: usize, s: usize) -> Result<u64> {
    let t = repetition_number(m, s)?;
    let c = binomial((s + t) as i64, t as i64 - 1);
    Ok(((t - 1) as u128 * m as u128 + 1 - c) as u64)
}

/// Schedule with `s` combined checkpoints. The budget is expressed in units.
pub fn modified_schedule(m: usize, s: usize, scheme: SchemeInfo) -> Result<Schedule> {
    if m < 1 || s < 1 {
        return Err(Error::Domain(format!("need m >= 1 and s >= 1 (got m={m}, s={s})")));
    }
    let units = s * unit_cost(CheckpointType::SolutionWithStages, &scheme);
    Policy::ModifiedRevolve.schedule(m, units, &scheme)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Classical,
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyChoice {
    pub strategy: Strategy,
    pub classical_checkpoints: usize,
    pub modified_checkpoints: usize,
    pub classical_cost: u64,
    /// `None` when the units do not hold a single combined checkpoint.
    pub modified_cost: Option<u64>,
}

/// Picks solution-only or combined checkpoints for `total_units`. Ties go to
/// the classical algorithm, so the switch happens exactly at [`crossover`].
pub fn select_strategy(m: usize, total_units: usize, scheme: &SchemeInfo) -> Result<StrategyChoice> {
    if total_units < 1 || m < 1 {
        return Err(Error::Domain("need m >= 1 and at least one unit".into()));
    }
    let s_mod = total_units / unit_cost(CheckpointType::SolutionWithStages, scheme);
    let classical_cost = revolve_cost(m, total_units)?;
    let modified = if s_mod >= 1 { Some(modified_cost(m, s_mod)?) } else { None };
    let strategy = match modified {
        Some(c) if c < classical_cost => Strategy::Modified,
        _ => Strategy::Classical,
    };
    Ok(StrategyChoice {
        strategy,
        classical_checkpoints: total_units,
        modified_checkpoints: s_mod,
        classical_cost,
        modified_cost: modified,
    })
}

/// First `m >= 2` at which solution-only checkpointing with `total_units`
/// needs no more recomputations than combined checkpoints of
/// `checkpoint_units` each. `None` if there is none below `limit`.
pub fn crossover(total_units: usize, checkpoint_units: usize, limit: usize) -> Result<Option<usize>> {
    if checkpoint_units < 2 || total_units < checkpoint_units {
        return Err(Error::Domain(format!(
            "need 2 <= checkpoint units <= total units (got {checkpoint_units} and {total_units})"
        )));
    }
    let s_mod = total_units / checkpoint_units;
    for m in 2..=limit {
        if revolve_cost(m, total_units)? <= modified_cost(m, s_mod)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
