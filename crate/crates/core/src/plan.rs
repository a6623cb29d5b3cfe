//! Turns a DP argmin path into an explicit action list.
//!
//! Every recursion starts from a held record at index `a` whose solution is
//! live (just stored, or just restored by the caller).

use std::collections::HashMap;

use crate::schedule::{Action, Schedule};
use crate::units::{CheckpointRecord, CheckpointType, SchemeInfo};

/// Argmin for reversing `n >= 2` steps from a held solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IsChoice {
    /// Next checkpoint is a solution after `split` steps.
    Solution(usize),
    /// Next checkpoint holds the stages of step `a + split`.
    Stages(usize),
}

/// Argmin for a range whose first step's stages are held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SvChoice {
    /// Two steps: the stages are kept, the second step is trailing.
    Leaf,
    /// The solution is stored alongside the stages.
    Fused,
    /// The next step's stages are stored as well.
    Chain,
}

/// How the initial state is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Root {
    /// Store the initial solution.
    Solution,
    /// Advance one step and keep its stages.
    Stages,
}

pub(crate) trait Planner {
    fn scheme(&self) -> SchemeInfo;
    /// True when stage-only records cannot be advanced from.
    fn general(&self) -> bool;
    fn is_choice(&self, n: usize, j: usize) -> IsChoice;
    fn sv_choice(&self, n: usize, j: usize) -> SvChoice;
}

pub(crate) fn emit<P: Planner>(p: &P, m: usize, budget: usize, root: Root) -> Schedule {
    let scheme = p.scheme();
    let mut e = Emitter { p, scheme, out: Vec::new() };
    if m == 1 {
        e.advance(0, 1);
        e.reverse(1);
    } else if m > 1 {
        let l = scheme.num_stages;
        match root {
            Root::Solution => {
                let r = e.store(0, CheckpointType::Solution);
                e.rev_is(0, m, budget - 1, r);
            }
            Root::Stages => {
                e.advance(0, 1);
                if p.general() {
                    e.rev_sv(1, m, budget - l);
                } else {
                    let r = e.store(1, CheckpointType::SolutionWithStages);
                    e.rev_is(1, m - 1, budget - l, r);
                    e.restore(r);
                    e.reverse(1);
                }
            }
        }
    }
    let mut schedule = Schedule::new(m, budget, scheme);
    schedule.actions = e.out;
    mark_discards(&mut schedule.actions);
    schedule
}

struct Emitter<'a, P> {
    p: &'a P,
    scheme: SchemeInfo,
    out: Vec<Action>,
}

impl<P: Planner> Emitter<'_, P> {
    fn advance(&mut self, from: usize, to: usize) {
        if from >= to {
            return;
        }
        match self.out.last_mut() {
            Some(Action::Advance { to: end, .. }) if *end == from => *end = to,
            _ => self.out.push(Action::Advance { from, to }),
        }
    }

    fn reverse(&mut self, step: usize) {
        self.out.push(Action::ReverseStep { step });
    }

    fn store(&mut self, at: usize, kind: CheckpointType) -> CheckpointRecord {
        let record = CheckpointRecord::new(at, kind, &self.scheme);
        self.out.push(Action::Store { record });
        record
    }

    fn restore(&mut self, record: CheckpointRecord) {
        self.out.push(Action::Restore { record, discard: false });
    }

    /// Reverse steps a+n..a+1 with `rec` held at `a` and `j` free units.
    fn rev_is(&mut self, a: usize, n: usize, j: usize, rec: CheckpointRecord) {
        if n == 0 {
            return;
        }
        if n == 1 {
            self.advance(a, a + 1);
            self.reverse(a + 1);
            return;
        }
        let l = self.scheme.num_stages;
        match self.p.is_choice(n, j) {
            IsChoice::Solution(k) => {
                self.advance(a, a + k);
                if n - k == 1 {
                    self.advance(a + k, a + n);
                    self.reverse(a + n);
                } else {
                    let r = self.store(a + k, CheckpointType::Solution);
                    self.rev_is(a + k, n - k, j - 1, r);
                }
                self.restore(rec);
                self.rev_is(a, k, j, rec);
            }
            IsChoice::Stages(k) => {
                self.advance(a, a + k);
                if self.p.general() {
                    self.rev_sv(a + k, n - k + 1, j - l);
                } else {
                    let r = self.store(a + k, CheckpointType::SolutionWithStages);
                    self.rev_is(a + k, n - k, j - l, r);
                    self.restore(r);
                    self.reverse(a + k);
                }
                if k > 1 {
                    self.restore(rec);
                    self.rev_is(a, k - 1, j, rec);
                }
            }
        }
    }

    /// Reverse steps p+n-1..p where the stages of step `p` are live and already
    /// paid for by the caller; `j` free units remain.
    fn rev_sv(&mut self, p: usize, n: usize, j: usize) {
        if n == 1 {
            self.reverse(p);
            return;
        }
        let l = self.scheme.num_stages;
        let choice = if n == 2 { SvChoice::Leaf } else { self.p.sv_choice(n, j) };
        let r = match choice {
            SvChoice::Leaf => {
                let r = self.store(p, CheckpointType::StageValues);
                self.advance(p, p + 1);
                self.reverse(p + 1);
                r
            }
            SvChoice::Fused => {
                let r = self.store(p, CheckpointType::SolutionWithStages);
                self.rev_is(p, n - 1, j - 1, r);
                r
            }
            SvChoice::Chain => {
                let r = self.store(p, CheckpointType::StageValues);
                self.advance(p, p + 1);
                self.rev_sv(p + 1, n - 1, j - l);
                r
            }
        };
        self.restore(r);
        self.reverse(p);
    }
}

/// Sets `discard` on the last restore of each stored record.
pub(crate) fn mark_discards(actions: &mut [Action]) {
    let mut last: HashMap<CheckpointRecord, usize> = HashMap::new();
    let mut hits = Vec::new();
    for (i, a) in actions.iter().enumerate() {
        match a {
            Action::Store { record } => {
                if let Some(k) = last.remove(record) {
                    hits.push(k);
                }
            }
            Action::Restore { record, .. } => {
                last.insert(*record, i);
            }
            _ => {}
        }
    }
    hits.extend(last.into_values());
    for i in hits {
        if let Action::Restore { discard, .. } = &mut actions[i] {
            *discard = true;
        }
    }
}
