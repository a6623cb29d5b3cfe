//! Exhaustive search over checkpointing strategies on small instances.
//!
//! The search is a 0-1 BFS where forward steps cost 1 and everything else is
//! free. Two rules keep it inside the class of schedules the DP tables
//! describe:
//!
//! - a step is reversed as soon as its stages are available, and
//! - a discarded checkpoint keeps its units until the next reversal.
//!
//! Checkpoints that can no longer be used are dropped automatically. Stored
//! stage values of a general scheme only serve to reverse their own step.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::units::{unit_cost, CheckpointType, SchemeInfo};

pub const MAX_STEPS: usize = 14;
pub const MAX_UNITS: usize = 8;
pub const MAX_STAGES: usize = 3;

/// Node of the search graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchState {
    /// Next step to reverse; zero when done.
    pub remaining_reversals: u8,
    /// Index of the live solution, if any.
    pub cursor: Option<u8>,
    /// Whether the stages of the step ending at `cursor` are live.
    pub trailing: bool,
    /// Bit `3 * index + kind code` marks a stored checkpoint.
    pub live_checkpoints: u64,
    /// Units of discarded checkpoints not yet released.
    pub pending_units: u8,
}

fn bit(index: usize, kind: CheckpointType) -> u64 {
    1 << (3 * index + kind.code() as usize)
}

fn records(mut mask: u64) -> impl Iterator<Item = (usize, CheckpointType)> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let b = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        let kind = CheckpointType::from_code((b % 3) as i32).expect("valid code");
        Some((b / 3, kind))
    })
}

/// Minimal recomputations for `m` steps within `s_units`, using only the
/// checkpoint kinds in `allowed_kinds`. `Ok(None)` means infeasible.
pub fn brute_force(
    m: usize,
    s_units: usize,
    scheme: &SchemeInfo,
    allowed_kinds: &[CheckpointType],
) -> Result<Option<u64>> {
    if m > MAX_STEPS || s_units > MAX_UNITS || scheme.num_stages > MAX_STAGES {
        return Err(Error::TooLarge(format!(
            "m={m}, s={s_units}, l={} (limits {MAX_STEPS}, {MAX_UNITS}, {MAX_STAGES})",
            scheme.num_stages
        )));
    }
    if m == 0 {
        return Ok(Some(0));
    }
    let cost = |k: CheckpointType| unit_cost(k, scheme);
    let gives_solution = |k: CheckpointType| k.provides_solution(scheme);

    let prune = |mut st: SearchState| {
        let k = st.remaining_reversals as usize;
        for (i, kind) in records(st.live_checkpoints) {
            let useful = match kind {
                CheckpointType::Solution => i < k,
                _ => i <= k,
            };
            if !useful {
                st.live_checkpoints &= !bit(i, kind);
            }
        }
        st
    };

    let start = SearchState {
        remaining_reversals: m as u8,
        cursor: Some(0),
        trailing: false,
        live_checkpoints: 0,
        pending_units: 0,
    };
    let mut dist: FxHashMap<SearchState, u32> = FxHashMap::default();
    dist.insert(start, 0);
    let mut queue = VecDeque::from([(0u32, start)]);
    let mut next = Vec::with_capacity(32);

    while let Some((d, st)) = queue.pop_front() {
        if dist.get(&st).is_some_and(|&best| best < d) {
            continue;
        }
        let k = st.remaining_reversals as usize;
        if k == 0 {
            return Ok(Some(d as u64 - m as u64));
        }
        next.clear();
        let reversed = |live: u64| SearchState {
            remaining_reversals: (k - 1) as u8,
            cursor: None,
            trailing: false,
            live_checkpoints: live,
            pending_units: 0,
        };
        // eager reversal
        if st.cursor == Some(k as u8) && st.trailing {
            next.push((reversed(st.live_checkpoints), 0));
        }
        for (i, kind) in records(st.live_checkpoints) {
            if i == k && kind.provides_stages() {
                next.push((reversed(st.live_checkpoints & !bit(i, kind)), 0));
            }
        }
        if next.is_empty() {
            let used: usize = records(st.live_checkpoints).map(|(_, kd)| cost(kd)).sum::<usize>()
                + st.pending_units as usize;
            if let Some(c) = st.cursor {
                let c = c as usize;
                if c < k {
                    next.push((SearchState { cursor: Some(c as u8 + 1), trailing: true, ..st }, 1));
                }
                for &kind in allowed_kinds {
                    if kind.provides_stages() && (!st.trailing || c < 1) {
                        continue;
                    }
                    let b = bit(c, kind);
                    if st.live_checkpoints & b != 0 || used + cost(kind) > s_units {
                        continue;
                    }
                    next.push((SearchState { live_checkpoints: st.live_checkpoints | b, ..st }, 0));
                }
            }
            for (i, kind) in records(st.live_checkpoints) {
                if gives_solution(kind) {
                    next.push((
                        SearchState { cursor: Some(i as u8), trailing: kind.provides_stages(), ..st },
                        0,
                    ));
                }
                next.push((
                    SearchState {
                        live_checkpoints: st.live_checkpoints & !bit(i, kind),
                        pending_units: st.pending_units + cost(kind) as u8,
                        ..st
                    },
                    0,
                ));
            }
        }
        for &(ns, w) in &next {
            let ns = prune(ns);
            let nd = d + w;
            if dist.get(&ns).is_none_or(|&best| nd < best) {
                dist.insert(ns, nd);
                if w == 0 {
                    queue.push_front((nd, ns));
                } else {
                    queue.push_back((nd, ns));
                }
            }
        }
    }
    Ok(None)
}
