use crate::error::{Error, Result};
use crate::grid::INF;
use crate::plan::{IsChoice, Planner, Root, SvChoice};
use crate::units::CheckpointType;

use super::tables::{CamsTables, Variant};

/// Where and what to store next.
pub type NextCheckpoint = Option<(usize, CheckpointType)>;

impl CamsTables {
    /// Consultant query: given the checkpoint just stored or restored, report
    /// the next one to store on the way to `range_end`, or `None` when the
    /// solver should run to `range_end` (or reverse directly) without storing.
    ///
    /// `remaining` is the number of free units with `last` already held. With
    /// `last = None` it is the whole budget and `range_end` is `m`.
    ///
    /// Pure function of its arguments.
    pub fn query(
        &self,
        last: Option<(usize, CheckpointType)>,
        remaining: usize,
        range_end: usize,
    ) -> Result<NextCheckpoint> {
        let Some((p, kind)) = last else {
            return self.query_root(remaining, range_end);
        };
        let bad = |reason: &str| Error::InvalidState {
            step: p as i64,
            kind: kind.to_string(),
            reason: reason.to_string(),
        };
        if range_end > self.m() || p > range_end {
            return Err(bad("outside the step range"));
        }
        if remaining >= self.s() {
            return Err(bad("more free units than the budget"));
        }
        let l = self.scheme().num_stages;
        match (self.variant(), kind) {
            (_, CheckpointType::Solution) => self.next_from_is(p, range_end - p, remaining),
            (Variant::Sa, CheckpointType::StageValues) | (_, CheckpointType::SolutionWithStages) => {
                if p == 0 {
                    return Err(bad("stages need a step index of at least 1"));
                }
                self.next_from_is(p, range_end - p, remaining)
            }
            (Variant::Gen, CheckpointType::StageValues) => {
                if p == 0 {
                    return Err(bad("stages need a step index of at least 1"));
                }
                let n = range_end - p + 1;
                if n <= 2 {
                    return Ok(None);
                }
                if self.q_sv(n, remaining) == INF {
                    return Err(bad("infeasible with the remaining units"));
                }
                if self.sv_choice(n, remaining) != SvChoice::Chain {
                    return Err(bad("the optimal path stores the solution here"));
                }
                Ok(Some((p + 1, self.sv_head(n - 1, remaining - l))))
            }
        }
    }

    /// Integer form of [`CamsTables::query`]: kinds use
    /// [`CheckpointType::code`], and `-1` stands for "none" on both sides.
    pub fn query_codes(
        &self,
        last_step: i64,
        last_kind: i32,
        remaining: usize,
        range_end: usize,
    ) -> Result<(i64, i32)> {
        let last = if last_step < 0 {
            None
        } else {
            let kind = CheckpointType::from_code(last_kind).ok_or_else(|| Error::InvalidState {
                step: last_step,
                kind: last_kind.to_string(),
                reason: "unknown kind code".into(),
            })?;
            Some((last_step as usize, kind))
        };
        Ok(match self.query(last, remaining, range_end)? {
            Some((p, k)) => (p as i64, k.code()),
            None => (-1, -1),
        })
    }

    fn query_root(&self, s: usize, m: usize) -> Result<NextCheckpoint> {
        if m != self.m() || s != self.s() {
            return Err(Error::InvalidState {
                step: -1,
                kind: "none".into(),
                reason: format!("tables were built for m={}, s={}", self.m(), self.s()),
            });
        }
        if m <= 1 {
            return Ok(None);
        }
        let l = self.scheme().num_stages;
        match self.root(m, s) {
            None => Err(Error::Infeasible { m, units: s }),
            Some(Root::Solution) => Ok(Some((0, CheckpointType::Solution))),
            Some(Root::Stages) if self.variant() == Variant::Sa => {
                Ok(Some((1, CheckpointType::SolutionWithStages)))
            }
            Some(Root::Stages) => Ok(Some((1, self.sv_head(m, s - l)))),
        }
    }

    fn next_from_is(&self, a: usize, n: usize, j: usize) -> Result<NextCheckpoint> {
        if n <= 1 {
            return Ok(None);
        }
        if self.q_is(n, j) == INF {
            return Err(Error::InvalidState {
                step: a as i64,
                kind: "held".into(),
                reason: format!("{n} steps cannot be reversed with {j} free units"),
            });
        }
        let l = self.scheme().num_stages;
        Ok(match self.is_choice(n, j) {
            IsChoice::Solution(k) if n - k == 1 => None,
            IsChoice::Solution(k) => Some((a + k, CheckpointType::Solution)),
            IsChoice::Stages(k) if self.variant() == Variant::Sa => {
                Some((a + k, CheckpointType::SolutionWithStages))
            }
            IsChoice::Stages(k) => Some((a + k, self.sv_head(n - k + 1, j - l))),
        })
    }

    /// Kind stored at the head of a stage range of `n` steps.
    fn sv_head(&self, n: usize, j: usize) -> CheckpointType {
        match self.sv_choice(n, j) {
            SvChoice::Fused => CheckpointType::SolutionWithStages,
            SvChoice::Leaf | SvChoice::Chain => CheckpointType::StageValues,
        }
    }
}
