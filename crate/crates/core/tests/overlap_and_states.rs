use std::f64::consts::{FRAC_1_SQRT_2, PI};

use solnoon_core::numerics::{linspace, QuadratureSettings};
use solnoon_core::states::{
    cat_size, ln_branch_overlap, overlap_x, scs_normalization, theta_noon, to_dicke, OverlapMode,
    SuperpositionSpec,
};
use solnoon_core::variational::{fit_alpha, overlap_i, overlap_i_parabolic};

#[test]
fn overlap_integral_matches_parabolic_band() {
    let q = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    for p in linspace(0.0, 1.0, 101).unwrap() {
        worst = worst.max((overlap_i(p, &q).unwrap() - overlap_i_parabolic(p)).abs());
    }
    // mpmath: max |I(p) − (1 − 0.21p²)| = 0.005965 on this grid.
    assert!((worst - 0.005965).abs() < 1e-5, "{worst}");
    assert!((overlap_i(0.0, &q).unwrap() - 1.0).abs() < 1e-10);
    assert!((overlap_i(1.0, &q).unwrap() - PI / 4.0).abs() < 1e-10);
}

#[test]
fn fitted_alpha_is_near_quoted_value() {
    let fit = fit_alpha(101, &QuadratureSettings::default()).unwrap();
    assert!((0.20..=0.22).contains(&fit.alpha), "{fit:?}");
    assert!((fit.alpha - 0.217_264_799_861_629_4).abs() < 1e-9);
    assert!(fit.max_residual <= 0.01);
}

#[test]
fn exact_and_parabolic_x_agree_on_grid() {
    let mut worst: f64 = 0.0;
    for p in linspace(0.0, 1.0, 101).unwrap() {
        let a = overlap_x(p, OverlapMode::ExactQuadrature).unwrap();
        let b = overlap_x(p, OverlapMode::Parabolic).unwrap();
        worst = worst.max((a - b).abs());
    }
    // mpmath: 0.00219.
    assert!((worst - 0.00219).abs() < 1e-4, "{worst}");
}

#[test]
fn cat_size_grows_with_particle_number() {
    for p in [0.1, 0.5, 0.9] {
        let sizes: Vec<f64> = [100, 1000, 10_000]
            .iter()
            .map(|&n| -ln_branch_overlap(p, n).unwrap())
            .collect();
        assert!(sizes.windows(2).all(|w| w[1] > w[0]));
    }
    assert_eq!(cat_size(0.5, 10_000).unwrap(), f64::INFINITY);
    assert!((-ln_branch_overlap(0.5, 100).unwrap() - 34.161_041_447_733_66).abs() < 1e-11);
    assert!((scs_normalization(0.5, 10_000).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
}

#[test]
fn noon_from_coupling() {
    let spec = SuperpositionSpec::noon_at_lambda(4, 0.79).unwrap();
    assert_eq!(spec.lambda, Some(0.79));
    let v = to_dicke(&spec).unwrap();
    let expected = theta_noon(0.79, 4).unwrap();
    assert!(
        (v.amplitudes()[4].arg() + expected - 2.0 * PI * ((expected / (2.0 * PI)).round())).abs()
            < 1e-12
    );
    assert!(SuperpositionSpec::noon_at_lambda(4, 2.0).is_err());
}
