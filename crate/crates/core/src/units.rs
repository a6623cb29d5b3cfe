//! Checkpoint kinds and their memory cost in units of one solution vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stage count of the time integrator and whether its last stage equals the
/// step's solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeInfo {
    #[serde(rename = "stages")]
    pub num_stages: usize,
    pub stiffly_accurate: bool,
}

impl SchemeInfo {
    pub fn new(num_stages: usize, stiffly_accurate: bool) -> Result<Self> {
        if num_stages == 0 {
            return Err(Error::Domain("a scheme needs at least one stage".into()));
        }
        Ok(Self { num_stages, stiffly_accurate })
    }

    pub fn general(num_stages: usize) -> Self {
        Self::new(num_stages, false).expect("num_stages must be positive")
    }

    pub fn stiffly_accurate(num_stages: usize) -> Self {
        Self::new(num_stages, true).expect("num_stages must be positive")
    }

    /// Units taken by the stage vectors of one step.
    pub fn stage_units(&self) -> usize {
        self.num_stages
    }
}

/// What a checkpoint holds.
///
/// Integer codes (stable, used by the consultant query and external callers):
///
/// | code | kind                 |
/// |------|----------------------|
/// | 0    | `Solution`           |
/// | 1    | `StageValues`        |
/// | 2    | `SolutionWithStages` |
///
/// `-1` stands for "no checkpoint yet" in the query API.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckpointType {
    Solution,
    StageValues,
    SolutionWithStages,
}

impl CheckpointType {
    pub const ALL: [CheckpointType; 3] =
        [CheckpointType::Solution, CheckpointType::StageValues, CheckpointType::SolutionWithStages];

    pub fn code(self) -> i32 {
        match self {
            CheckpointType::Solution => 0,
            CheckpointType::StageValues => 1,
            CheckpointType::SolutionWithStages => 2,
        }
    }

    pub fn from_code(code: i32) -> Option<Self> {
        match code {
            0 => Some(CheckpointType::Solution),
            1 => Some(CheckpointType::StageValues),
            2 => Some(CheckpointType::SolutionWithStages),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckpointType::Solution => "solution",
            CheckpointType::StageValues => "stage_values",
            CheckpointType::SolutionWithStages => "solution_with_stages",
        }
    }

    /// Whether restoring this record yields a solution one can advance from.
    /// Stage values of a stiffly accurate scheme contain the solution as their
    /// last stage.
    pub fn provides_solution(self, scheme: &SchemeInfo) -> bool {
        match self {
            CheckpointType::Solution | CheckpointType::SolutionWithStages => true,
            CheckpointType::StageValues => scheme.stiffly_accurate,
        }
    }

    /// Whether the record lets the step ending at its index be reversed.
    pub fn provides_stages(self) -> bool {
        !matches!(self, CheckpointType::Solution)
    }
}

impl fmt::Display for CheckpointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn unit_cost(kind: CheckpointType, scheme: &SchemeInfo) -> usize {
    let l = scheme.num_stages;
    match kind {
        CheckpointType::Solution => 1,
        CheckpointType::StageValues => l,
        CheckpointType::SolutionWithStages if scheme.stiffly_accurate => l,
        CheckpointType::SolutionWithStages => l + 1,
    }
}

/// A stored checkpoint. For stage-carrying kinds `step_index` is the index the
/// step ends at, so `StageValues` at `k` reverses step `k` (from `k-1` to `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CheckpointRecord {
    #[serde(rename = "index")]
    pub step_index: usize,
    pub kind: CheckpointType,
    pub units: usize,
}

impl CheckpointRecord {
    pub fn new(step_index: usize, kind: CheckpointType, scheme: &SchemeInfo) -> Self {
        Self { step_index, kind, units: unit_cost(kind, scheme) }
    }
}
