use cams_core::cams::{CamsTables, Variant};
use cams_core::executor::{consultant_run, execute, CountingEngine, Policy};
use cams_core::{revolve_schedule, SchemeInfo};

fn schemes() -> Vec<SchemeInfo> {
    let mut v = Vec::new();
    for l in 1..=4 {
        v.push(SchemeInfo::general(l));
        v.push(SchemeInfo::stiffly_accurate(l));
    }
    v
}

#[test]
fn every_policy_replays_at_its_predicted_cost() {
    for scheme in schemes() {
        for policy in Policy::ALL {
            if !policy.supports(&scheme) {
                continue;
            }
            for m in 1..=40 {
                for units in 0..=3 * scheme.num_stages + 4 {
                    let Ok(predicted) = policy.predicted_cost(m, units, &scheme) else {
                        continue;
                    };
                    let s = policy
                        .schedule(m, units, &scheme)
                        .unwrap_or_else(|e| panic!("{policy} m={m} units={units} {scheme:?}: {e}"));
                    let metrics = execute(&s, CountingEngine::default()).unwrap_or_else(|e| {
                        panic!("{policy} m={m} units={units} {scheme:?}: {e}\n{}", s.to_text())
                    });
                    assert_eq!(
                        metrics.recomputations as u64, predicted,
                        "{policy} m={m} units={units} {scheme:?}"
                    );
                    assert!(metrics.peak_units <= units);
                }
            }
        }
    }
}

#[test]
fn consultant_loop_matches_schedule_replay() {
    let scheme = SchemeInfo::general(2);
    for policy in [Policy::Revolve, Policy::ModifiedRevolve, Policy::CamsGen] {
        for m in 1..=25 {
            for units in 3..=9 {
                let s = policy.schedule(m, units, &scheme).unwrap();
                let a = execute(&s, CountingEngine::default()).unwrap();
                let (b, _) = consultant_run(m, units, &scheme, policy, CountingEngine::default()).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn revolve_driver_reproduces_the_dp_schedule() {
    let scheme = SchemeInfo::general(1);
    for m in 1..=30 {
        for s in 1..=6 {
            let dp = revolve_schedule(m, s).unwrap();
            let driven = Policy::Revolve.schedule(m, s, &scheme).unwrap();
            assert_eq!(dp.actions, driven.actions, "m={m} s={s}");
        }
    }
}

#[test]
fn query_is_idempotent() {
    let t = CamsTables::build(20, 8, SchemeInfo::general(2), Variant::Gen).unwrap();
    let a = t.query(None, 8, 20).unwrap();
    for _ in 0..5 {
        assert_eq!(t.query(None, 8, 20).unwrap(), a);
    }
}
