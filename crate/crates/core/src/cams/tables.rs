use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, INF};
use crate::plan::{self, IsChoice, Planner, Root, SvChoice};
use crate::revolve::{add3, finite};
use crate::schedule::Schedule;
use crate::units::SchemeInfo;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Stiffly accurate schemes: stored stages also give the solution.
    Sa,
    /// General schemes: stage-only records reverse one step and nothing else.
    Gen,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Sa => "cams-sa",
            Variant::Gen => "cams-gen",
        }
    }
}

const SV_FUSED: u32 = 1;
const SV_CHAIN: u32 = 2;

/// Cost tables for one (m, s, scheme, variant).
///
/// Internally cells are indexed by free units: `(i, j)` is the cost of
/// reversing `i` steps when the starting record is already held and `j` units
/// remain. The accessors [`CamsTables::p_is`] and
/// [`CamsTables::p_sv`] count the held record in the budget instead.
///
/// Ties resolve to the lowest cost, then stage checkpoints over solution
/// checkpoints, then the smallest split.
#[derive(Debug, Clone)]
pub struct CamsTables {
    m: usize,
    s: usize,
    scheme: SchemeInfo,
    variant: Variant,
    is_cost: Grid,
    // split << 1 | case, case 1 = stage checkpoint
    is_path: Grid,
    sv_cost: Option<Grid>,
    sv_path: Option<Grid>,
}

pub fn build_sa_tables(m: usize, s: usize, scheme: SchemeInfo) -> Result<CamsTables> {
    if !scheme.stiffly_accurate {
        return Err(Error::Domain("the stiffly accurate tables need a stiffly accurate scheme".into()));
    }
    CamsTables::build(m, s, scheme, Variant::Sa)
}

pub fn build_gen_tables(m: usize, s: usize, scheme: SchemeInfo) -> Result<CamsTables> {
    CamsTables::build(m, s, scheme, Variant::Gen)
}

pub fn sa_total_cost(t: &CamsTables) -> Option<u64> {
    t.total(t.m, t.s)
}

pub fn gen_total_cost(t: &CamsTables) -> Option<u64> {
    t.total(t.m, t.s)
}

impl CamsTables {
    pub fn build(m: usize, s: usize, scheme: SchemeInfo, variant: Variant) -> Result<Self> {
        if m < 1 || s < 1 {
            return Err(Error::Domain(format!("need m >= 1 and s >= 1 (got m={m}, s={s})")));
        }
        if variant == Variant::Sa && !scheme.stiffly_accurate {
            return Err(Error::Domain("cams-sa needs a stiffly accurate scheme".into()));
        }
        let l = scheme.num_stages;
        // the general tables price a fused record at l + 1 on any scheme
        let scheme = match variant {
            Variant::Gen => SchemeInfo::general(l),
            Variant::Sa => scheme,
        };
        let w = s;
        let gen = variant == Variant::Gen;
        let mut ic = Grid::new(m + 1, w, INF);
        let mut ip = Grid::new(m + 1, w, 0);
        let mut vc = Grid::new(if gen { m + 1 } else { 0 }, w, INF);
        let mut vp = Grid::new(if gen { m + 1 } else { 0 }, w, 0);
        for j in 0..w {
            for i in 0..=m.min(1) {
                ic.set(i, j, 0);
                if gen {
                    vc.set(i, j, 0);
                }
            }
        }
        for i in 2..=m {
            for j in 0..w {
                let mut best = INF;
                let mut path = 0;
                // stage checkpoints first so they win ties
                if j >= l {
                    for k in 1..i {
                        let sub2 = if gen { vc.get(i - k + 1, j - l) } else { ic.get(i - k, j - l) };
                        let c = add3((k - 1) as u32, ic.get(k - 1, j), sub2);
                        if c < best {
                            best = c;
                            path = (k as u32) << 1 | 1;
                        }
                    }
                }
                for k in 1..i {
                    let sub2 = if i - k == 1 {
                        0
                    } else if j == 0 {
                        INF
                    } else {
                        ic.get(i - k, j - 1)
                    };
                    let c = add3(k as u32, ic.get(k, j), sub2);
                    if c < best {
                        best = c;
                        path = (k as u32) << 1;
                    }
                }
                ic.set(i, j, best);
                ip.set(i, j, path);
                if gen {
                    if i == 2 {
                        vc.set(i, j, 0);
                    } else {
                        let fused = if j >= 1 { ic.get(i - 1, j - 1) } else { INF };
                        let chain = if j >= l { vc.get(i - 1, j - l) } else { INF };
                        if fused <= chain {
                            vc.set(i, j, fused);
                            vp.set(i, j, SV_FUSED);
                        } else {
                            vc.set(i, j, chain);
                            vp.set(i, j, SV_CHAIN);
                        }
                    }
                }
            }
        }
        Ok(Self {
            m,
            s,
            scheme,
            variant,
            is_cost: ic,
            is_path: ip,
            sv_cost: gen.then_some(vc),
            sv_path: gen.then_some(vp),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn scheme(&self) -> SchemeInfo {
        self.scheme
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub(crate) fn q_is(&self, i: usize, j: usize) -> u32 {
        self.is_cost.get(i, j)
    }

    pub(crate) fn q_sv(&self, i: usize, j: usize) -> u32 {
        match &self.sv_cost {
            Some(g) => g.get(i, j),
            None => INF,
        }
    }

    /// Cost of reversing `i` steps starting from a stored solution, with
    /// `units` counting that solution.
    pub fn p_is(&self, i: usize, units: usize) -> Option<u64> {
        if units == 0 || units > self.s || i > self.m {
            return None;
        }
        finite(self.q_is(i, units - 1))
    }

    /// Cost of reversing `i` steps whose first step's stages are stored, with
    /// `units` counting those stages. General variant only.
    pub fn p_sv(&self, i: usize, units: usize) -> Option<u64> {
        let l = self.scheme.num_stages;
        if self.variant != Variant::Gen || units < l || units - l >= self.s || i > self.m {
            return None;
        }
        finite(self.q_sv(i, units - l))
    }

    fn root_costs(&self, m: usize, s: usize) -> (u32, u32) {
        let l = self.scheme.num_stages;
        let a = self.q_is(m, s - 1);
        let b = if s < l {
            INF
        } else if self.variant == Variant::Gen {
            self.q_sv(m, s - l)
        } else {
            self.q_is(m - 1, s - l)
        };
        (a, b)
    }

    /// Optimal total for any `m <= self.m()` and `s <= self.s()`.
    pub fn total(&self, m: usize, s: usize) -> Option<u64> {
        assert!(m <= self.m && s <= self.s, "outside table");
        if m <= 1 {
            return Some(0);
        }
        if s == 0 {
            return None;
        }
        let (a, b) = self.root_costs(m, s);
        finite(a.min(b))
    }

    /// Schedule read straight off the argmin path, without the consultant
    /// loop. Used to cross-check [`crate::cams::cams_schedule`].
    pub fn path_schedule(&self) -> Result<Schedule> {
        let (m, s) = (self.m, self.s);
        if m <= 1 {
            return Ok(plan::emit(self, m, s, Root::Solution));
        }
        let root = self.root(m, s).ok_or(Error::Infeasible { m, units: s })?;
        Ok(plan::emit(self, m, s, root))
    }

    pub(crate) fn root(&self, m: usize, s: usize) -> Option<Root> {
        if m <= 1 || s == 0 {
            return None;
        }
        let (a, b) = self.root_costs(m, s);
        if a == INF && b == INF {
            None
        } else if b <= a {
            Some(Root::Stages)
        } else {
            Some(Root::Solution)
        }
    }
}

impl Planner for CamsTables {
    fn scheme(&self) -> SchemeInfo {
        self.scheme
    }

    fn general(&self) -> bool {
        self.variant == Variant::Gen
    }

    fn is_choice(&self, n: usize, j: usize) -> IsChoice {
        let p = self.is_path.get(n, j);
        let k = (p >> 1) as usize;
        if p & 1 == 1 {
            IsChoice::Stages(k)
        } else {
            IsChoice::Solution(k)
        }
    }

    fn sv_choice(&self, n: usize, j: usize) -> SvChoice {
        if n <= 2 {
            return SvChoice::Leaf;
        }
        match self.sv_path.as_ref().map(|g| g.get(n, j)) {
            Some(SV_FUSED) => SvChoice::Fused,
            Some(SV_CHAIN) => SvChoice::Chain,
            _ => unreachable!("no stage path for ({n}, {j})"),
        }
    }
}
