//! Replays schedules against a step engine and checks every rule on the way.

mod drivers;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::schedule::{Action, Schedule};
use crate::units::{unit_cost, CheckpointRecord, CheckpointType, SchemeInfo};

pub use drivers::{consultant_run, drive, Policy};

pub type EngineResult = std::result::Result<(), String>;

/// Receives the work a schedule asks for. Steps are numbered by the index they
/// end at: `forward_step(k)` computes `k` from `k-1`.
pub trait StepEngine {
    fn forward_step(&mut self, _step: usize) -> EngineResult {
        Ok(())
    }
    fn reverse_step(&mut self, _step: usize) -> EngineResult {
        Ok(())
    }
    fn store(&mut self, _record: &CheckpointRecord) -> EngineResult {
        Ok(())
    }
    fn restore(&mut self, _record: &CheckpointRecord) -> EngineResult {
        Ok(())
    }
    fn discard(&mut self, _record: &CheckpointRecord) -> EngineResult {
        Ok(())
    }
}

impl<E: StepEngine + ?Sized> StepEngine for &mut E {
    fn forward_step(&mut self, step: usize) -> EngineResult {
        (**self).forward_step(step)
    }
    fn reverse_step(&mut self, step: usize) -> EngineResult {
        (**self).reverse_step(step)
    }
    fn store(&mut self, record: &CheckpointRecord) -> EngineResult {
        (**self).store(record)
    }
    fn restore(&mut self, record: &CheckpointRecord) -> EngineResult {
        (**self).restore(record)
    }
    fn discard(&mut self, record: &CheckpointRecord) -> EngineResult {
        (**self).discard(record)
    }
}

/// Engine that only counts calls.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountingEngine {
    pub forward: usize,
    pub reverse: usize,
    pub stores: usize,
    pub restores: usize,
    pub discards: usize,
}

impl StepEngine for CountingEngine {
    fn forward_step(&mut self, _step: usize) -> EngineResult {
        self.forward += 1;
        Ok(())
    }
    fn reverse_step(&mut self, _step: usize) -> EngineResult {
        self.reverse += 1;
        Ok(())
    }
    fn store(&mut self, _r: &CheckpointRecord) -> EngineResult {
        self.stores += 1;
        Ok(())
    }
    fn restore(&mut self, _r: &CheckpointRecord) -> EngineResult {
        self.restores += 1;
        Ok(())
    }
    fn discard(&mut self, _r: &CheckpointRecord) -> EngineResult {
        self.discards += 1;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub call: String,
    pub index: usize,
    pub kind: String,
}

/// Engine that records every call, for golden-trace tests.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceEngine {
    pub events: Vec<TraceEvent>,
}

impl TraceEngine {
    fn push(&mut self, call: &str, index: usize, kind: &str) -> EngineResult {
        self.events.push(TraceEvent { call: call.into(), index, kind: kind.into() });
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.events).expect("trace serializes")
    }
}

impl StepEngine for TraceEngine {
    fn forward_step(&mut self, step: usize) -> EngineResult {
        self.push("forward", step, "none")
    }
    fn reverse_step(&mut self, step: usize) -> EngineResult {
        self.push("reverse", step, "none")
    }
    fn store(&mut self, r: &CheckpointRecord) -> EngineResult {
        self.push("store", r.step_index, r.kind.as_str())
    }
    fn restore(&mut self, r: &CheckpointRecord) -> EngineResult {
        self.push("restore", r.step_index, r.kind.as_str())
    }
    fn discard(&mut self, r: &CheckpointRecord) -> EngineResult {
        self.push("discard", r.step_index, r.kind.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionMetrics {
    /// Forward steps beyond the m of the first sweep.
    pub recomputations: usize,
    pub first_sweep_steps: usize,
    pub stores: usize,
    pub restores: usize,
    pub peak_units: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    EmptyAdvance,
    AdvanceWithoutSolution { from: usize },
    AdvancePastReversal { to: usize, next: usize },
    StoreNotAtCursor { index: usize },
    StoreWithoutStages { index: usize },
    WrongUnits { expected: usize, got: usize },
    AlreadyStored,
    BudgetExceeded { needed: usize, budget: usize },
    RestoreNotLive,
    ReverseOutOfOrder { expected: usize, got: usize },
    ReverseWithoutStages { step: usize },
    Incomplete { next: usize },
    Engine(String),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::EmptyAdvance => write!(f, "advance must move forward"),
            Rule::AdvanceWithoutSolution { from } => write!(f, "no live solution at {from}"),
            Rule::AdvancePastReversal { to, next } => {
                write!(f, "advance to {to} passes the next reversal {next}")
            }
            Rule::StoreNotAtCursor { index } => write!(f, "store at {index} is not the live state"),
            Rule::StoreWithoutStages { index } => write!(f, "stages of step {index} are not live"),
            Rule::WrongUnits { expected, got } => {
                write!(f, "record claims {got} units, kind costs {expected}")
            }
            Rule::AlreadyStored => write!(f, "record already stored"),
            Rule::BudgetExceeded { needed, budget } => {
                write!(f, "{needed} units live, budget is {budget}")
            }
            Rule::RestoreNotLive => write!(f, "restore of a record that is not stored"),
            Rule::ReverseOutOfOrder { expected, got } => {
                write!(f, "reversed step {got}, expected {expected}")
            }
            Rule::ReverseWithoutStages { step } => write!(f, "no stages live for step {step}"),
            Rule::Incomplete { next } => write!(f, "schedule ended with step {next} unreversed"),
            Rule::Engine(msg) => write!(f, "engine: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("action {action_index}: {rule}")]
pub struct ValidationError {
    pub action_index: usize,
    pub rule: Rule,
}

/// Incremental executor. Feed it actions one at a time and call
/// [`Replay::finish`] at the end.
pub struct Replay<E> {
    scheme: SchemeInfo,
    budget: usize,
    m: usize,
    engine: E,
    /// Index of the live solution, if any.
    cursor: Option<usize>,
    /// Step whose stages are live, if any.
    stages: Option<usize>,
    live: BTreeMap<(usize, CheckpointType), usize>,
    used: usize,
    next_reverse: usize,
    forward: usize,
    reversed_any: bool,
    metrics: ExecutionMetrics,
    index: usize,
}

impl<E: StepEngine> Replay<E> {
    pub fn new(m: usize, budget: usize, scheme: SchemeInfo, engine: E) -> Self {
        Self {
            scheme,
            budget,
            m,
            engine,
            cursor: Some(0),
            stages: None,
            live: BTreeMap::new(),
            used: 0,
            next_reverse: m,
            forward: 0,
            reversed_any: false,
            metrics: ExecutionMetrics::default(),
            index: 0,
        }
    }

    pub fn engine(&self) -> &E {
        &self.engine
    }

    pub fn into_engine(self) -> E {
        self.engine
    }

    pub fn used_units(&self) -> usize {
        self.used
    }

    pub fn live_records(&self) -> Vec<CheckpointRecord> {
        self.live
            .iter()
            .map(|(&(step_index, kind), &units)| CheckpointRecord { step_index, kind, units })
            .collect()
    }

    fn fail(&self, rule: Rule) -> ValidationError {
        ValidationError { action_index: self.index, rule }
    }

    fn engine_call(&self, r: EngineResult) -> Result<(), ValidationError> {
        r.map_err(|e| self.fail(Rule::Engine(e)))
    }

    pub fn apply(&mut self, action: &Action) -> Result<(), ValidationError> {
        self.check(action)?;
        self.index += 1;
        Ok(())
    }

    fn check(&mut self, action: &Action) -> Result<(), ValidationError> {
        match *action {
            Action::Advance { from, to } => {
                if from >= to {
                    return Err(self.fail(Rule::EmptyAdvance));
                }
                if self.cursor != Some(from) {
                    return Err(self.fail(Rule::AdvanceWithoutSolution { from }));
                }
                if to > self.next_reverse {
                    return Err(self.fail(Rule::AdvancePastReversal { to, next: self.next_reverse }));
                }
                for k in from + 1..=to {
                    let r = self.engine.forward_step(k);
                    self.engine_call(r)?;
                }
                self.forward += to - from;
                if !self.reversed_any {
                    self.metrics.first_sweep_steps += to - from;
                }
                self.cursor = Some(to);
                self.stages = Some(to);
            }
            Action::Store { record } => {
                let idx = record.step_index;
                let expected = unit_cost(record.kind, &self.scheme);
                if record.units != expected {
                    return Err(self.fail(Rule::WrongUnits { expected, got: record.units }));
                }
                let needs_solution = record.kind != CheckpointType::StageValues;
                if needs_solution && self.cursor != Some(idx) {
                    return Err(self.fail(Rule::StoreNotAtCursor { index: idx }));
                }
                if record.kind.provides_stages() && (idx == 0 || self.stages != Some(idx)) {
                    return Err(self.fail(Rule::StoreWithoutStages { index: idx }));
                }
                if self.live.contains_key(&(idx, record.kind)) {
                    return Err(self.fail(Rule::AlreadyStored));
                }
                let needed = self.used + record.units;
                if needed > self.budget {
                    return Err(self.fail(Rule::BudgetExceeded { needed, budget: self.budget }));
                }
                let r = self.engine.store(&record);
                self.engine_call(r)?;
                self.live.insert((idx, record.kind), record.units);
                self.used = needed;
                self.metrics.peak_units = self.metrics.peak_units.max(needed);
                self.metrics.stores += 1;
            }
            Action::Restore { record, discard } => {
                let key = (record.step_index, record.kind);
                if self.live.get(&key) != Some(&record.units) {
                    return Err(self.fail(Rule::RestoreNotLive));
                }
                let r = self.engine.restore(&record);
                self.engine_call(r)?;
                self.metrics.restores += 1;
                self.cursor = record.kind.provides_solution(&self.scheme).then_some(record.step_index);
                self.stages = record.kind.provides_stages().then_some(record.step_index);
                if discard {
                    let r = self.engine.discard(&record);
                    self.engine_call(r)?;
                    self.live.remove(&key);
                    self.used -= record.units;
                }
            }
            Action::ReverseStep { step } => {
                if step != self.next_reverse || step == 0 {
                    return Err(self.fail(Rule::ReverseOutOfOrder { expected: self.next_reverse, got: step }));
                }
                if self.stages != Some(step) {
                    return Err(self.fail(Rule::ReverseWithoutStages { step }));
                }
                let r = self.engine.reverse_step(step);
                self.engine_call(r)?;
                self.next_reverse -= 1;
                self.reversed_any = true;
                self.cursor = None;
                self.stages = None;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(ExecutionMetrics, E), ValidationError> {
        if self.next_reverse != 0 {
            return Err(self.fail(Rule::Incomplete { next: self.next_reverse }));
        }
        let mut metrics = self.metrics;
        metrics.recomputations = self.forward.saturating_sub(self.m);
        Ok((metrics, self.engine))
    }
}

/// Runs a whole schedule.
pub fn execute<E: StepEngine>(schedule: &Schedule, engine: E) -> Result<ExecutionMetrics, ValidationError> {
    execute_with(schedule, engine).map(|(m, _)| m)
}

/// Like [`execute`] but hands the engine back.
pub fn execute_with<E: StepEngine>(
    schedule: &Schedule,
    engine: E,
) -> Result<(ExecutionMetrics, E), ValidationError> {
    let mut replay = Replay::new(schedule.m, schedule.budget_units, schedule.scheme, engine);
    for a in &schedule.actions {
        replay.apply(a)?;
    }
    replay.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(i: usize) -> CheckpointRecord {
        CheckpointRecord::new(i, CheckpointType::Solution, &SchemeInfo::general(2))
    }

    fn sched(m: usize, budget: usize, actions: Vec<Action>) -> Schedule {
        let mut s = Schedule::new(m, budget, SchemeInfo::general(2));
        s.actions = actions;
        s
    }

    #[test]
    fn single_step_needs_no_memory() {
        let s = sched(1, 0, vec![Action::Advance { from: 0, to: 1 }, Action::ReverseStep { step: 1 }]);
        let m = execute(&s, CountingEngine::default()).unwrap();
        assert_eq!(m.recomputations, 0);
        assert_eq!(m.peak_units, 0);
    }

    #[test]
    fn reverse_without_stages_rejected() {
        let s = sched(
            2,
            1,
            vec![
                Action::Store { record: sol(0) },
                Action::Advance { from: 0, to: 2 },
                Action::ReverseStep { step: 2 },
                Action::ReverseStep { step: 1 },
            ],
        );
        let e = execute(&s, CountingEngine::default()).unwrap_err();
        assert_eq!(e.action_index, 3);
        assert!(matches!(e.rule, Rule::ReverseOutOfOrder { .. } | Rule::ReverseWithoutStages { .. }));
    }

    #[test]
    fn budget_enforced() {
        let s = sched(
            3,
            1,
            vec![
                Action::Store { record: sol(0) },
                Action::Advance { from: 0, to: 1 },
                Action::Store { record: sol(1) },
            ],
        );
        let e = execute(&s, CountingEngine::default()).unwrap_err();
        assert_eq!(e.action_index, 2);
        assert!(matches!(e.rule, Rule::BudgetExceeded { needed: 2, budget: 1 }));
    }

    #[test]
    fn restore_of_missing_record_rejected() {
        let s = sched(
            2,
            1,
            vec![
                Action::Advance { from: 0, to: 2 },
                Action::ReverseStep { step: 2 },
                Action::Restore { record: sol(0), discard: true },
            ],
        );
        let e = execute(&s, CountingEngine::default()).unwrap_err();
        assert_eq!(e.rule, Rule::RestoreNotLive);
    }

    #[test]
    fn incomplete_rejected() {
        let s = sched(2, 1, vec![Action::Advance { from: 0, to: 2 }, Action::ReverseStep { step: 2 }]);
        let e = execute(&s, CountingEngine::default()).unwrap_err();
        assert_eq!(e.rule, Rule::Incomplete { next: 1 });
    }

    #[test]
    fn stage_values_do_not_advance_for_general_schemes() {
        let scheme = SchemeInfo::general(2);
        let u = CheckpointRecord::new(1, CheckpointType::StageValues, &scheme);
        let s = sched(
            3,
            2,
            vec![
                Action::Advance { from: 0, to: 1 },
                Action::Store { record: u },
                Action::Advance { from: 1, to: 3 },
                Action::ReverseStep { step: 3 },
                Action::Restore { record: u, discard: false },
                Action::Advance { from: 1, to: 2 },
            ],
        );
        let e = execute(&s, CountingEngine::default()).unwrap_err();
        assert_eq!(e.rule, Rule::AdvanceWithoutSolution { from: 1 });
    }
}
