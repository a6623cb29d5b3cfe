use cams_core::{execute, revolve_cost, revolve_dp_cost, CountingEngine, Policy, Schedule, SchemeInfo};
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = SchemeInfo> {
    (1usize..=4, any::<bool>()).prop_map(|(l, sa)| SchemeInfo { num_stages: l, stiffly_accurate: sa })
}

fn policy() -> impl Strategy<Value = Policy> {
    proptest::sample::select(Policy::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn replay_is_valid_and_costs_what_was_predicted(
        sc in scheme(), p in policy(), m in 1usize..120, units in 1usize..20,
    ) {
        let Ok(predicted) = p.predicted_cost(m, units, &sc) else {
            return Ok(());
        };
        let s = p.schedule(m, units, &sc).unwrap();
        let metrics = execute(&s, CountingEngine::default()).unwrap();
        prop_assert_eq!(metrics.recomputations as u64, predicted);
        prop_assert!(metrics.peak_units <= units);
        prop_assert_eq!(metrics.first_sweep_steps, m);
    }

    #[test]
    fn schedules_survive_json(sc in scheme(), p in policy(), m in 1usize..40, units in 1usize..12) {
        let Ok(s) = p.schedule(m, units, &sc) else {
            return Ok(());
        };
        let back = Schedule::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn closed_form_agrees_with_recursion(m in 1usize..200, s in 1usize..20) {
        prop_assert_eq!(Some(revolve_cost(m, s).unwrap()), revolve_dp_cost(m, s));
    }

    #[test]
    fn mixed_checkpoints_never_lose(l in 1usize..=3, m in 2usize..150, units in 1usize..30) {
        let g = SchemeInfo::general(l);
        let sa = SchemeInfo::stiffly_accurate(l);
        let rev = Policy::Revolve.predicted_cost(m, units, &g).unwrap();
        let gen = Policy::CamsGen.predicted_cost(m, units, &g).unwrap();
        let csa = Policy::CamsSa.predicted_cost(m, units, &sa).unwrap();
        prop_assert!(gen <= rev && csa <= gen);
        if let Ok(md) = Policy::ModifiedRevolve.predicted_cost(m, units, &g) {
            prop_assert!(gen <= md);
        }
    }
}
