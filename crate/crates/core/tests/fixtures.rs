use cams_core::executor::{execute_with, TraceEngine};
use cams_core::{
    execute, modified_schedule, revolve_schedule, Action, CheckpointRecord, CheckpointType, CountingEngine,
    Policy, Schedule, SchemeInfo,
};
use CheckpointType::*;

fn first_sweep(s: &Schedule) -> Vec<(usize, CheckpointType)> {
    s.first_sweep_stores().iter().map(|r| (r.step_index, r.kind)).collect()
}

#[test]
fn ten_steps_three_solutions() {
    let s = revolve_schedule(10, 3).unwrap();
    assert_eq!(first_sweep(&s), [(0, Solution), (4, Solution), (7, Solution)]);
    assert_eq!(execute(&s, CountingEngine::default()).unwrap().recomputations, 15);
    assert_eq!(s.counted_recomputations(), 15);
}

#[test]
fn ten_steps_six_units_two_stages() {
    let g = SchemeInfo::general(2);
    let sa = SchemeInfo::stiffly_accurate(2);
    let run = |p: Policy, sc: &SchemeInfo| {
        let s = p.schedule(10, 6, sc).unwrap();
        let n = execute(&s, CountingEngine::default()).unwrap().recomputations;
        (first_sweep(&s), n)
    };

    let (_, n) = run(Policy::Revolve, &g);
    assert_eq!(n, 12);

    let (stores, n) = run(Policy::CamsSa, &sa);
    assert_eq!(n, 6);
    assert_eq!(stores, [(1, SolutionWithStages), (5, SolutionWithStages), (8, SolutionWithStages)]);

    let (stores, n) = run(Policy::CamsGen, &g);
    assert_eq!(n, 8);
    assert_eq!(stores, [(0, Solution), (1, Solution), (4, Solution), (6, Solution), (9, StageValues)]);
}

#[test]
fn modified_stores_shift_by_one() {
    let s = modified_schedule(10, 3, SchemeInfo::general(2)).unwrap();
    let idx: Vec<usize> = s.first_sweep_stores().iter().map(|r| r.step_index).collect();
    assert_eq!(idx, [1, 5, 8]);
    assert!(s.stores().iter().all(|r| r.kind == SolutionWithStages));
    assert_eq!(execute(&s, CountingEngine::default()).unwrap().recomputations, 6);
}

/// Builds schedules by hand with the free-at-last-restore convention.
struct Script {
    scheme: SchemeInfo,
    actions: Vec<Action>,
}

impl Script {
    fn new(scheme: SchemeInfo) -> Self {
        Self { scheme, actions: Vec::new() }
    }
    fn rec(&self, i: usize, kind: CheckpointType) -> CheckpointRecord {
        CheckpointRecord::new(i, kind, &self.scheme)
    }
    fn adv(&mut self, from: usize, to: usize) -> &mut Self {
        self.actions.push(Action::Advance { from, to });
        self
    }
    fn store(&mut self, i: usize, kind: CheckpointType) -> &mut Self {
        let record = self.rec(i, kind);
        self.actions.push(Action::Store { record });
        self
    }
    fn restore(&mut self, i: usize, kind: CheckpointType, discard: bool) -> &mut Self {
        let record = self.rec(i, kind);
        self.actions.push(Action::Restore { record, discard });
        self
    }
    fn rev(&mut self, step: usize) -> &mut Self {
        self.actions.push(Action::ReverseStep { step });
        self
    }
}

// Second solution at 2 instead of 1: same cost, but the tables prefer the
// smaller split.
#[test]
fn shifted_general_schedule_costs_the_same() {
    let g = SchemeInfo::general(2);
    let mut b = Script::new(g);
    b.store(0, Solution).adv(0, 2).store(2, Solution).adv(2, 4).store(4, Solution);
    b.adv(4, 6).store(6, Solution).adv(6, 9).store(9, StageValues).adv(9, 10).rev(10);
    b.restore(9, StageValues, true).rev(9);
    for p in [6, 4, 2] {
        b.restore(p, Solution, true).adv(p, p + 1).store(p + 1, StageValues).adv(p + 1, p + 2).rev(p + 2);
        b.restore(p + 1, StageValues, true).rev(p + 1);
    }
    b.restore(0, Solution, true).adv(0, 1).store(1, StageValues).adv(1, 2).rev(2);
    b.restore(1, StageValues, true).rev(1);

    let mut s = Schedule::new(10, 6, g);
    s.actions = b.actions.clone();
    let m = execute(&s, CountingEngine::default()).unwrap();
    assert_eq!(m.recomputations, 8);
    assert!(m.peak_units <= 6);
}

#[test]
fn revolve_trace_is_stable() {
    let s = Policy::Revolve.schedule(4, 2, &SchemeInfo::general(1)).unwrap();
    let (_, t) = execute_with(&s, TraceEngine::default()).unwrap();
    let golden = r#"[{"call":"store","index":0,"kind":"solution"},{"call":"forward","index":1,"kind":"none"},{"call":"store","index":1,"kind":"solution"},{"call":"forward","index":2,"kind":"none"},{"call":"forward","index":3,"kind":"none"},{"call":"forward","index":4,"kind":"none"},{"call":"reverse","index":4,"kind":"none"},{"call":"restore","index":1,"kind":"solution"},{"call":"forward","index":2,"kind":"none"},{"call":"forward","index":3,"kind":"none"},{"call":"reverse","index":3,"kind":"none"},{"call":"restore","index":1,"kind":"solution"},{"call":"discard","index":1,"kind":"solution"},{"call":"forward","index":2,"kind":"none"},{"call":"reverse","index":2,"kind":"none"},{"call":"restore","index":0,"kind":"solution"},{"call":"discard","index":0,"kind":"solution"},{"call":"forward","index":1,"kind":"none"},{"call":"reverse","index":1,"kind":"none"}]"#;
    assert_eq!(t.to_json(), golden);
}

#[test]
fn cams_sa_trace_is_stable() {
    let s = Policy::CamsSa.schedule(4, 2, &SchemeInfo::stiffly_accurate(1)).unwrap();
    let text = s.to_text();
    let golden = "\
# m=4 budget=2 stages=1 (stiffly accurate)
advance      0 -> 1
store    SU@1 [1u]
advance      1 -> 2
store    SU@2 [1u]
advance      2 -> 4
reverse      4
restore  SU@2 [1u]
advance      2 -> 3
reverse      3
restore  SU@2 [1u] (discard)
reverse      2
restore  SU@1 [1u] (discard)
reverse      1
";
    assert_eq!(text, golden);
}
