//! Consultant-style drivers: the solver owns the time loop and asks the
//! scheduler what to do next.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cams::{CamsTables, Variant};
use crate::error::{Error, Result};
use crate::modified::modified_cost;
use crate::revolve::{revolve_cost, RevolveAction, RevolveCursor};
use crate::schedule::{Action, Schedule};
use crate::units::{unit_cost, CheckpointRecord, CheckpointType, SchemeInfo};

use super::{ExecutionMetrics, Replay, StepEngine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    Revolve,
    #[serde(rename = "mrevolve")]
    ModifiedRevolve,
    CamsSa,
    CamsGen,
    FullStorage,
}

impl Policy {
    pub const ALL: [Policy; 5] =
        [Policy::Revolve, Policy::ModifiedRevolve, Policy::CamsSa, Policy::CamsGen, Policy::FullStorage];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Revolve => "revolve",
            Policy::ModifiedRevolve => "mrevolve",
            Policy::CamsSa => "cams-sa",
            Policy::CamsGen => "cams-gen",
            Policy::FullStorage => "full-storage",
        }
    }

    /// Whether the policy can run on this scheme.
    pub fn supports(self, scheme: &SchemeInfo) -> bool {
        self != Policy::CamsSa || scheme.stiffly_accurate
    }

    /// The scheme the policy plans for. The general CAMS tables price every
    /// record as on a general scheme, so they see a stiffly accurate scheme
    /// as a general one.
    pub fn planning_scheme(self, scheme: &SchemeInfo) -> SchemeInfo {
        match self {
            Policy::CamsGen => SchemeInfo::general(scheme.num_stages),
            _ => *scheme,
        }
    }

    /// Checkpoints available to the policy out of `units`.
    pub fn checkpoints(self, units: usize, scheme: &SchemeInfo) -> usize {
        match self {
            Policy::ModifiedRevolve => units / unit_cost(CheckpointType::SolutionWithStages, scheme),
            _ => units,
        }
    }

    /// Recomputations the policy needs for `m` steps within `units`.
    pub fn predicted_cost(self, m: usize, units: usize, scheme: &SchemeInfo) -> Result<u64> {
        if m == 0 {
            return Err(Error::Domain("m must be at least 1".into()));
        }
        if !self.supports(scheme) {
            return Err(Error::Domain(format!("{} needs a stiffly accurate scheme", self.name())));
        }
        if m == 1 {
            return Ok(0);
        }
        let scheme = &self.planning_scheme(scheme);
        let s = self.checkpoints(units, scheme);
        let infeasible = Error::Infeasible { m, units };
        match self {
            Policy::Revolve if s >= 1 => revolve_cost(m, s),
            Policy::ModifiedRevolve if s >= 1 => modified_cost(m, s),
            Policy::CamsSa | Policy::CamsGen if s >= 1 => {
                self.tables(m, s, scheme)?.total(m, s).ok_or(infeasible)
            }
            Policy::FullStorage if units >= scheme.num_stages * (m - 1) => Ok(0),
            _ => Err(infeasible),
        }
    }

    fn tables(self, m: usize, s: usize, scheme: &SchemeInfo) -> Result<CamsTables> {
        let v = if self == Policy::CamsSa { Variant::Sa } else { Variant::Gen };
        CamsTables::build(m, s, *scheme, v)
    }

    /// The action list the driver produces.
    pub fn schedule(self, m: usize, units: usize, scheme: &SchemeInfo) -> Result<Schedule> {
        let mut s = Schedule::new(m, units, self.planning_scheme(scheme));
        let mut actions = Vec::new();
        drive(self, m, units, scheme, &mut |a| {
            actions.push(a);
            Ok(())
        })?;
        s.actions = actions;
        Ok(s)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown policy '{s}'")))
    }
}

/// Runs the policy's driver loop against `engine` through the validating
/// executor. Budgets are in units for every policy.
pub fn consultant_run<E: StepEngine>(
    m: usize,
    units: usize,
    scheme: &SchemeInfo,
    policy: Policy,
    engine: E,
) -> Result<(ExecutionMetrics, E)> {
    let mut replay = Replay::new(m, units, policy.planning_scheme(scheme), engine);
    drive(policy, m, units, scheme, &mut |a| {
        replay.apply(&a)?;
        Ok(())
    })?;
    Ok(replay.finish()?)
}

type Emit<'a> = &'a mut dyn FnMut(Action) -> Result<()>;

/// Feeds the actions of `policy` to `emit` as the driver decides them.
pub fn drive(policy: Policy, m: usize, units: usize, scheme: &SchemeInfo, emit: Emit) -> Result<()> {
    policy.predicted_cost(m, units, scheme)?;
    let scheme = &policy.planning_scheme(scheme);
    let mut out = Out { emit, pending: None, scheme: *scheme };
    if m == 1 {
        out.advance(0, 1)?;
        out.reverse(1)?;
    } else {
        let s = policy.checkpoints(units, scheme);
        match policy {
            Policy::Revolve => revolve_loop(&mut out, m, s, false)?,
            Policy::ModifiedRevolve => revolve_loop(&mut out, m, s, true)?,
            Policy::CamsSa | Policy::CamsGen => cams_loop(&mut out, &policy.tables(m, s, scheme)?)?,
            Policy::FullStorage => full_storage_loop(&mut out, m)?,
        }
    }
    out.flush()
}

/// Merges back-to-back advances into one.
struct Out<'a> {
    emit: Emit<'a>,
    pending: Option<(usize, usize)>,
    scheme: SchemeInfo,
}

impl Out<'_> {
    fn flush(&mut self) -> Result<()> {
        if let Some((from, to)) = self.pending.take() {
            (self.emit)(Action::Advance { from, to })?;
        }
        Ok(())
    }

    fn push(&mut self, a: Action) -> Result<()> {
        self.flush()?;
        (self.emit)(a)
    }

    fn advance(&mut self, from: usize, to: usize) -> Result<()> {
        if from >= to {
            return Ok(());
        }
        match self.pending {
            Some((a, b)) if b == from => self.pending = Some((a, to)),
            _ => {
                self.flush()?;
                self.pending = Some((from, to));
            }
        }
        Ok(())
    }

    fn record(&self, at: usize, kind: CheckpointType) -> CheckpointRecord {
        CheckpointRecord::new(at, kind, &self.scheme)
    }

    fn store(&mut self, record: CheckpointRecord) -> Result<()> {
        self.push(Action::Store { record })
    }

    fn restore(&mut self, record: CheckpointRecord, discard: bool) -> Result<()> {
        self.push(Action::Restore { record, discard })
    }

    fn reverse(&mut self, step: usize) -> Result<()> {
        self.push(Action::ReverseStep { step })
    }
}

fn unexpected(a: RevolveAction, phase: &str) -> Error {
    Error::Domain(format!("revolve returned {} during the {phase}", a.tag()))
}

/// The classical loop, and with `shifted` the modified one where every
/// checkpoint moves one step later and also holds that step's stages.
fn revolve_loop(out: &mut Out, m: usize, s: usize, shifted: bool) -> Result<()> {
    let mut cur = RevolveCursor::new(m, s)?;
    let (kind, off) =
        if shifted { (CheckpointType::SolutionWithStages, 1) } else { (CheckpointType::Solution, 0) };
    if shifted {
        // the first step runs before the first consultation
        out.advance(0, 1)?;
    }
    let turn = |out: &mut Out, step: usize| -> Result<()> {
        if !shifted {
            out.advance(step - 1, step)?;
        }
        out.reverse(step)
    };
    loop {
        let capo = cur.state.capo;
        match cur.next_action() {
            RevolveAction::Takeshot { index } => out.store(out.record(index + off, kind))?,
            RevolveAction::Advance { to } => out.advance(capo + off, to + off)?,
            RevolveAction::Firsturn { step } => {
                turn(out, step)?;
                break;
            }
            a => return Err(unexpected(a, "forward sweep")),
        }
    }
    for i in (1..m).rev() {
        match cur.next_action() {
            RevolveAction::Restore { index, discard } => {
                out.restore(out.record(index + off, kind), discard)?
            }
            a => {
                return Err(Error::Domain(format!(
                    "reverse step {i} must start from restoring a checkpoint, got {}",
                    a.tag()
                )))
            }
        }
        loop {
            let capo = cur.state.capo;
            match cur.next_action() {
                RevolveAction::Takeshot { index } => out.store(out.record(index + off, kind))?,
                RevolveAction::Advance { to } => out.advance(capo + off, to + off)?,
                RevolveAction::Youturn { step } if step == i => {
                    turn(out, step)?;
                    break;
                }
                a => return Err(unexpected(a, "reverse sweep")),
            }
        }
    }
    match cur.next_action() {
        RevolveAction::Terminate => Ok(()),
        a => Err(unexpected(a, "final check")),
    }
}

/// Checkpoints held by the CAMS loop. Discarded units stay `pending` until
/// the next reversal, which is how the tables account for them.
struct Held {
    records: Vec<CheckpointRecord>,
    used: usize,
    pending: usize,
}

impl Held {
    /// The record to restore before reversing step `i`: stages of `i` itself
    /// if held, else the latest solution before `i`.
    fn closest(&self, i: usize, scheme: &SchemeInfo) -> Option<CheckpointRecord> {
        let direct = self.records.iter().find(|r| r.step_index == i && r.kind.provides_stages());
        direct.copied().or_else(|| {
            self.records
                .iter()
                .filter(|r| r.step_index < i && r.kind.provides_solution(scheme))
                .max_by_key(|r| r.step_index)
                .copied()
        })
    }

    fn remove(&mut self, r: &CheckpointRecord) {
        self.records.retain(|x| x != r);
        self.used -= r.units;
        self.pending += r.units;
    }

    fn push(&mut self, r: CheckpointRecord) {
        self.records.push(r);
        self.used += r.units;
    }

    fn free(&self, s: usize) -> usize {
        s - self.used - self.pending
    }
}

/// Forward from `pos` to `end`, storing where the tables say, then reverse
/// step `end`.
fn cams_sweep(
    out: &mut Out,
    t: &CamsTables,
    held: &mut Held,
    mut pos: usize,
    end: usize,
    mut next: Option<(usize, CheckpointType)>,
) -> Result<()> {
    while let Some((p, kind)) = next {
        out.advance(pos, p)?;
        let r = out.record(p, kind);
        out.store(r)?;
        held.push(r);
        pos = p;
        next = t.query(Some((p, kind)), held.free(t.s()), end)?;
    }
    out.advance(pos, end)?;
    held.pending = 0;
    out.reverse(end)
}

fn cams_loop(out: &mut Out, t: &CamsTables) -> Result<()> {
    let (m, s) = (t.m(), t.s());
    let scheme = t.scheme();
    let mut held = Held { records: Vec::new(), used: 0, pending: 0 };
    let mut next = t.query(None, s, m)?;
    if let Some((0, kind)) = next {
        let r = out.record(0, kind);
        out.store(r)?;
        held.push(r);
        next = t.query(Some((0, kind)), held.free(s), m)?;
    }
    cams_sweep(out, t, &mut held, 0, m, next)?;
    for i in (1..m).rev() {
        let rec = held.closest(i, &scheme).ok_or_else(|| Error::InvalidState {
            step: i as i64,
            kind: "none".into(),
            reason: "no checkpoint can reach this step".into(),
        })?;
        let p = rec.step_index;
        if p == i {
            out.restore(rec, true)?;
            held.remove(&rec);
            held.pending = 0;
            out.reverse(i)?;
            continue;
        }
        let next = t.query(Some((p, rec.kind)), held.free(s), i)?;
        // a solution is done once the next checkpoint holds the stages of the
        // step right after it
        let last_use = rec.kind == CheckpointType::Solution
            && (p + 1 == i || matches!(next, Some((q, k)) if q == p + 1 && k.provides_stages()));
        out.restore(rec, last_use)?;
        if last_use {
            held.remove(&rec);
        }
        cams_sweep(out, t, &mut held, p, i, next)?;
    }
    Ok(())
}

/// Stores the stages of every step but the last; no recomputation.
fn full_storage_loop(out: &mut Out, m: usize) -> Result<()> {
    for k in 1..m {
        out.advance(k - 1, k)?;
        out.store(out.record(k, CheckpointType::StageValues))?;
    }
    out.advance(m - 1, m)?;
    out.reverse(m)?;
    for k in (1..m).rev() {
        out.restore(out.record(k, CheckpointType::StageValues), true)?;
        out.reverse(k)?;
    }
    Ok(())
}
