//! Schedules as explicit action lists, plus their JSON and text forms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::units::{CheckpointRecord, CheckpointType, SchemeInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Action {
    Advance {
        from: usize,
        to: usize,
    },
    Store {
        #[serde(flatten)]
        record: CheckpointRecord,
    },
    Restore {
        #[serde(flatten)]
        record: CheckpointRecord,
        discard: bool,
    },
    #[serde(rename = "reverse")]
    ReverseStep {
        step: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub m: usize,
    pub budget_units: usize,
    pub scheme: SchemeInfo,
    pub actions: Vec<Action>,
}

impl Schedule {
    pub fn new(m: usize, budget_units: usize, scheme: SchemeInfo) -> Self {
        Self { m, budget_units, scheme, actions: Vec::new() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Stores made before the first reversal.
    pub fn first_sweep_stores(&self) -> Vec<CheckpointRecord> {
        self.actions
            .iter()
            .take_while(|a| !matches!(a, Action::ReverseStep { .. }))
            .filter_map(|a| match a {
                Action::Store { record } => Some(*record),
                _ => None,
            })
            .collect()
    }

    pub fn stores(&self) -> Vec<CheckpointRecord> {
        self.actions
            .iter()
            .filter_map(|a| match a {
                Action::Store { record } => Some(*record),
                _ => None,
            })
            .collect()
    }

    /// Forward steps implied by the action list, minus the first sweep's m.
    pub fn counted_recomputations(&self) -> usize {
        let steps: usize = self
            .actions
            .iter()
            .map(|a| match a {
                Action::Advance { from, to } => to - from,
                _ => 0,
            })
            .sum();
        steps.saturating_sub(self.m)
    }

    /// One line per action; `S` marks solutions, `U` stage values and `SU`
    /// combined records.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# m={} budget={} stages={}{}",
            self.m,
            self.budget_units,
            self.scheme.num_stages,
            if self.scheme.stiffly_accurate { " (stiffly accurate)" } else { "" }
        );
        for a in &self.actions {
            let _ = match a {
                Action::Advance { from, to } => writeln!(out, "advance  {from:>5} -> {to}"),
                Action::Store { record } => writeln!(out, "store    {}", tag(record)),
                Action::Restore { record, discard } => {
                    writeln!(out, "restore  {}{}", tag(record), if *discard { " (discard)" } else { "" })
                }
                Action::ReverseStep { step } => writeln!(out, "reverse  {step:>5}"),
            };
        }
        out
    }
}

fn tag(r: &CheckpointRecord) -> String {
    let k = match r.kind {
        CheckpointType::Solution => "S",
        CheckpointType::StageValues => "U",
        CheckpointType::SolutionWithStages => "SU",
    };
    format!("{k}@{} [{}u]", r.step_index, r.units)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let scheme = SchemeInfo::general(2);
        let mut s = Schedule::new(2, 3, scheme);
        s.actions = vec![
            Action::Store { record: CheckpointRecord::new(0, CheckpointType::Solution, &scheme) },
            Action::Advance { from: 0, to: 2 },
            Action::ReverseStep { step: 2 },
            Action::Restore {
                record: CheckpointRecord::new(0, CheckpointType::Solution, &scheme),
                discard: true,
            },
            Action::Advance { from: 0, to: 1 },
            Action::ReverseStep { step: 1 },
        ];
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["scheme"]["stages"], 2);
        assert_eq!(v["actions"][0]["op"], "store");
        assert_eq!(v["actions"][0]["kind"], "solution");
        assert_eq!(v["actions"][0]["units"], 1);
        assert_eq!(v["actions"][2]["op"], "reverse");
        assert_eq!(v["actions"][3]["discard"], true);
        assert_eq!(Schedule::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(s.counted_recomputations(), 1);
    }
}
