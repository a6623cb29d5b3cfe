use cams_core::adjoint::{
    finite_difference_gradient, gradient_via_policy, relative_error, scheme_of, ButcherTableau, OdeProblem,
};
use cams_core::Policy;

#[test]
fn rk4_scalar_gradient_is_the_amplification_factor() {
    let (a, h, n) = (-0.8, 0.1, 10);
    let p = OdeProblem::linear_scalar(a, h, n, ButcherTableau::rk4());
    let z: f64 = a * h;
    let r = 1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0;
    for policy in [Policy::Revolve, Policy::ModifiedRevolve, Policy::CamsGen] {
        let g = gradient_via_policy(&p, policy, 10).unwrap();
        assert!((g.gradient[0] - r.powi(n as i32)).abs() < 1e-14, "{policy}");
    }
}

#[test]
fn linear_system_matches_finite_differences() {
    let p = OdeProblem::linear_2d(25, ButcherTableau::midpoint());
    let fd = finite_difference_gradient(&p, 1e-6).unwrap();
    let g = gradient_via_policy(&p, Policy::CamsGen, 4).unwrap();
    assert!(relative_error(&g.gradient, &fd) < 1e-8);
    assert_eq!(g.metrics.recomputations as u64, g.predicted_recomputations);
}

#[test]
fn stiffly_accurate_tableau_gives_the_same_gradient_everywhere() {
    let p = OdeProblem::gray_scott(20, ButcherTableau::heun_sa());
    let scheme = scheme_of(&p);
    assert!(scheme.stiffly_accurate);
    let reference = gradient_via_policy(&p, Policy::FullStorage, scheme.num_stages * 19).unwrap();
    for policy in Policy::ALL {
        for units in [3, 4, 7, 10] {
            let Ok(g) = gradient_via_policy(&p, policy, units) else {
                continue;
            };
            assert_eq!(g.gradient, reference.gradient, "{policy} units={units}");
            assert_eq!(g.metrics.recomputations as u64, g.predicted_recomputations);
            assert!(g.metrics.peak_units <= units);
        }
    }
}

#[test]
fn gray_scott_rk4_gradient() {
    let p = OdeProblem::gray_scott(12, ButcherTableau::rk4());
    assert_eq!(p.dim(), 32);
    let fd = finite_difference_gradient(&p, 1e-6).unwrap();
    let g = gradient_via_policy(&p, Policy::CamsGen, 6).unwrap();
    assert!(relative_error(&g.gradient, &fd) < 1e-6);
}
