//! Optimal checkpointing for multistage schemes, where a checkpoint may hold
//! a solution, the stages of one step, or both.

mod query;
mod tables;

use std::fmt::Write as _;

pub use query::NextCheckpoint;
pub use tables::{build_gen_tables, build_sa_tables, gen_total_cost, sa_total_cost, CamsTables, Variant};

use crate::error::{Error, Result};
use crate::executor::Policy;
use crate::schedule::Schedule;
use crate::units::SchemeInfo;

/// Query without keeping tables around: builds them for `(m, s)` and asks once.
pub fn cams_query(
    last: Option<(usize, crate::units::CheckpointType)>,
    remaining: usize,
    range_end: usize,
    m: usize,
    s: usize,
    scheme: SchemeInfo,
    variant: Variant,
) -> Result<NextCheckpoint> {
    CamsTables::build(m, s, scheme, variant)?.query(last, remaining, range_end)
}

/// Full schedule from the consultant loop over [`CamsTables::query`].
pub fn cams_schedule(m: usize, s: usize, scheme: SchemeInfo, variant: Variant) -> Result<Schedule> {
    let policy = match variant {
        Variant::Sa => Policy::CamsSa,
        Variant::Gen => Policy::CamsGen,
    };
    if variant == Variant::Sa && !scheme.stiffly_accurate {
        return Err(Error::Domain("cams-sa needs a stiffly accurate scheme".into()));
    }
    policy.schedule(m, s, &scheme)
}

/// CSV with header `m,s,l,variant,cost`, one row per `(m, s)` pair; infeasible
/// cells print `inf`.
pub fn cost_table_csv(tables: &CamsTables, cells: &[(usize, usize)]) -> String {
    let mut out = String::from("m,s,l,variant,cost\n");
    let l = tables.scheme().num_stages;
    for &(m, s) in cells {
        let cost = match tables.total(m, s) {
            Some(c) => c.to_string(),
            None => "inf".into(),
        };
        let _ = writeln!(out, "{m},{s},{l},{},{cost}", tables.variant().name());
    }
    out
}
