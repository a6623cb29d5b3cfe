//! Classical binomial checkpointing with solution-only checkpoints.

use crate::error::{Error, Result};
use crate::grid::{Grid, INF};
use crate::plan::{self, IsChoice, Planner, Root, SvChoice};
use crate::schedule::{Action, Schedule};
use crate::units::SchemeInfo;

/// Binomial coefficient, saturating at `u128::MAX`. `k` outside `[0, n]`
/// gives zero.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut r: u128 = 1;
    for i in 0..k {
        // r * (n - i) / (i + 1) stays integral at every step
        r = match r.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    r
}

/// Smallest `t >= 1` with `m <= C(s+t, t)`.
pub fn repetition_number(m: usize, s: usize) -> Result<usize> {
    if m < 1 || s < 1 {
        return Err(Error::Domain(format!("repetition number needs m >= 1 and s >= 1 (got m={m}, s={s})")));
    }
    let m = m as u128;
    let s = s as u128;
    // c = C(s+t, t), grown incrementally
    let mut t: u128 = 1;
    let mut c: u128 = s + 1;
    while c < m {
        t += 1;
        c = c.saturating_mul(s + t) / t;
    }
    Ok(t as usize)
}

/// Minimal recomputations for `m` steps with `s` solution checkpoints.
pub fn revolve_cost(m: usize, s: usize) -> Result<u64> {
    let t = repetition_number(m, s)?;
    let c = binomial((s + t) as i64, t as i64 - 1);
    Ok((t as u128 * m as u128 - c) as u64)
}

/// Cost tables of the P_R recurrence. Cell `(i, j)` is the cost of reversing
/// `i` steps from a held checkpoint with `j` more checkpoints free.
#[derive(Debug, Clone)]
pub struct RevolveTable {
    max_m: usize,
    max_s: usize,
    cost: Grid,
    split: Grid,
}

impl RevolveTable {
    pub fn build(max_m: usize, max_s: usize) -> Self {
        let w = max_s.max(1);
        let mut cost = Grid::new(max_m + 1, w, INF);
        let mut split = Grid::new(max_m + 1, w, 0);
        for j in 0..w {
            cost.set(0, j, 0);
            if max_m >= 1 {
                cost.set(1, j, 0);
            }
        }
        for i in 2..=max_m {
            for j in 0..w {
                let mut best = INF;
                let mut arg = 0;
                for k in 1..i {
                    let sub2 = if i - k == 1 {
                        0
                    } else if j == 0 {
                        INF
                    } else {
                        cost.get(i - k, j - 1)
                    };
                    let c = add3(k as u32, cost.get(k, j), sub2);
                    if c < best {
                        best = c;
                        arg = k as u32;
                    }
                }
                cost.set(i, j, best);
                split.set(i, j, arg);
            }
        }
        Self { max_m, max_s, cost, split }
    }

    /// P_R(m, s), `None` when infeasible.
    pub fn total(&self, m: usize, s: usize) -> Option<u64> {
        assert!(m <= self.max_m && s <= self.max_s.max(1), "outside table");
        if m <= 1 {
            return Some(0);
        }
        if s == 0 {
            return None;
        }
        finite(self.cost.get(m, s - 1))
    }

    pub fn split(&self, i: usize, j: usize) -> usize {
        self.split.get(i, j) as usize
    }

    pub fn max_m(&self) -> usize {
        self.max_m
    }

    pub fn max_s(&self) -> usize {
        self.max_s
    }
}

impl Planner for RevolveTable {
    fn scheme(&self) -> SchemeInfo {
        SchemeInfo::general(1)
    }

    fn general(&self) -> bool {
        true
    }

    fn is_choice(&self, n: usize, j: usize) -> IsChoice {
        IsChoice::Solution(self.split(n, j))
    }

    fn sv_choice(&self, _n: usize, _j: usize) -> SvChoice {
        unreachable!("revolve never stores stages")
    }
}

pub(crate) fn finite(c: u32) -> Option<u64> {
    (c != INF).then_some(c as u64)
}

pub(crate) fn add3(a: u32, b: u32, c: u32) -> u32 {
    if a == INF || b == INF || c == INF {
        INF
    } else {
        a + b + c
    }
}

/// Cost via the recurrence, `None` when `s = 0` and `m > 1`.
pub fn revolve_dp_cost(m: usize, s: usize) -> Option<u64> {
    if m <= 1 {
        return Some(0);
    }
    RevolveTable::build(m, s).total(m, s)
}

pub fn revolve_schedule(m: usize, s: usize) -> Result<Schedule> {
    if m < 1 || s < 1 {
        return Err(Error::Domain(format!("need m >= 1 and s >= 1 (got m={m}, s={s})")));
    }
    let table = RevolveTable::build(m, s);
    if table.total(m, s).is_none() {
        return Err(Error::Infeasible { m, units: s });
    }
    Ok(plan::emit(&table, m, s, Root::Solution))
}

/// Revolve's action nomenclature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevolveAction {
    Takeshot {
        index: usize,
    },
    Advance {
        to: usize,
    },
    Restore {
        index: usize,
        discard: bool,
    },
    /// Advance one step into `step` and reverse it; the first reversal.
    Firsturn {
        step: usize,
    },
    /// Same as `Firsturn` for every later reversal.
    Youturn {
        step: usize,
    },
    Terminate,
}

impl RevolveAction {
    pub fn tag(&self) -> &'static str {
        match self {
            RevolveAction::Takeshot { .. } => "TAKESHOT",
            RevolveAction::Advance { .. } => "ADVANCE",
            RevolveAction::Restore { .. } => "RESTORE",
            RevolveAction::Firsturn { .. } => "FIRSTURN",
            RevolveAction::Youturn { .. } => "YOUTURN",
            RevolveAction::Terminate => "TERMINATE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RevolveState {
    pub capo: usize,
    pub fine: usize,
    pub check: usize,
    pub snaps: usize,
    pub stepstogo: usize,
}

/// Replays a DP-built schedule one Revolve action at a time.
#[derive(Debug, Clone)]
pub struct RevolveCursor {
    ops: Vec<RevolveAction>,
    pos: usize,
    pub state: RevolveState,
}

impl RevolveCursor {
    pub fn new(m: usize, snaps: usize) -> Result<Self> {
        let schedule = revolve_schedule(m, snaps)?;
        Ok(Self::from_schedule(&schedule, snaps))
    }

    fn from_schedule(schedule: &Schedule, snaps: usize) -> Self {
        let m = schedule.m;
        let acts = &schedule.actions;
        let mut ops = Vec::new();
        for (i, a) in acts.iter().enumerate() {
            match *a {
                Action::Store { record } => ops.push(RevolveAction::Takeshot { index: record.step_index }),
                Action::Restore { record, discard } => {
                    ops.push(RevolveAction::Restore { index: record.step_index, discard })
                }
                Action::Advance { from, to } => {
                    let turns = matches!(acts.get(i + 1), Some(Action::ReverseStep { step }) if *step == to);
                    if !turns {
                        ops.push(RevolveAction::Advance { to });
                    } else if to - 1 > from {
                        ops.push(RevolveAction::Advance { to: to - 1 });
                    }
                }
                Action::ReverseStep { step } => ops.push(if step == m {
                    RevolveAction::Firsturn { step }
                } else {
                    RevolveAction::Youturn { step }
                }),
            }
        }
        Self { ops, pos: 0, state: RevolveState { capo: 0, fine: m, check: 0, snaps, stepstogo: 0 } }
    }

    pub fn next_action(&mut self) -> RevolveAction {
        let Some(&op) = self.ops.get(self.pos) else {
            return RevolveAction::Terminate;
        };
        self.pos += 1;
        let st = &mut self.state;
        match op {
            RevolveAction::Takeshot { .. } => st.check += 1,
            RevolveAction::Advance { to } => {
                st.stepstogo = to - st.capo;
                st.capo = to;
            }
            RevolveAction::Restore { index, discard } => {
                st.capo = index;
                if discard {
                    st.check -= 1;
                }
            }
            RevolveAction::Firsturn { step } | RevolveAction::Youturn { step } => {
                st.stepstogo = 1;
                st.fine = step - 1;
                st.capo = step - 1;
            }
            RevolveAction::Terminate => {}
        }
        op
    }
}
