use proptest::prelude::*;
use solnoon_core::dynamics::{eom_rhs, evolve, VariationalState};
use solnoon_core::lambda_critical;
use solnoon_core::numerics::{linspace, OdeSettings};
use solnoon_core::stationary::{
    lambda_cat_upper, set1_solution, set2_solution, stationary_points, Branch,
};
use solnoon_core::variational::MassSign;

#[test]
fn fixed_point_residuals_over_both_windows() {
    for mass in [MassSign::Positive, MassSign::Negative] {
        let g1 = linspace(lambda_critical(), lambda_cat_upper(), 50).unwrap();
        let g2 = linspace(1e-3, lambda_critical(), 50).unwrap();
        let pts = g1
            .iter()
            .flat_map(|&l| set1_solution(l, mass))
            .chain(g2.iter().flat_map(|&l| set2_solution(l, mass)));
        for pt in pts {
            let s = VariationalState::new(pt.p0, pt.theta0, pt.lambda, mass).unwrap();
            let (a, b) = eom_rhs(&s);
            assert!(a.abs().max(b.abs()) <= 1e-12, "{pt:?}");
        }
    }
}

#[test]
fn both_branches_exist_only_at_critical_coupling() {
    let both = |l: f64| {
        let pts = stationary_points(l, MassSign::Positive);
        pts.iter().any(|p| p.branch == Branch::Set1) && pts.iter().any(|p| p.branch == Branch::Set2)
    };
    assert!(both(1.58));
    assert!(!both(1.5) && !both(1.7));
}

#[test]
fn quoted_energy_drift_example() {
    let s = VariationalState::new(0.6, 0.0, 2.0, MassSign::Positive).unwrap();
    let t = evolve(&s, 100.0, &OdeSettings::default()).unwrap();
    assert!(t.energy_drift <= 1e-9, "{}", t.energy_drift);
    assert!((t.last().t_prime - 100.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_conserved(p in -0.97f64..0.97, theta in -3.1f64..3.1, li in 0usize..4) {
        let lambda = [0.5, 1.58, 2.0, 2.42][li];
        let s = VariationalState::new(p, theta, lambda, MassSign::Positive).unwrap();
        let t = evolve(&s, 100.0, &OdeSettings::default()).unwrap();
        prop_assert!(t.energy_drift <= 1e-9, "drift {}", t.energy_drift);
        prop_assert!(t.samples.iter().all(|x| x.state.p.abs() <= 1.0));
    }
}
