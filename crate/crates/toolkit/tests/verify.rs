use bergman_core::c64;
use bergman_core::diskquad::QuadratureSpec;
use bergman_core::funcspace::{cn, geom_partial_closed, AnalyticFn};
use bergman_core::operators::{
    adjoint_quad, adjoint_series, truncated_kernel_integral, AdjointForm,
};
use bergman_toolkit::verify::*;

#[test]
fn eq7_examples() {
    let r = check_eq7(&[0], &[0.0, 0.5, 0.9], 100_000, 1e-10);
    assert!(r.pass);
    for s in [0.0, 0.3, 0.999] {
        assert_eq!(geom_partial_closed(0, s).unwrap(), 2.0);
    }
    assert!(check_eq7(&[100], &[0.9], 100_000, 1e-10).pass);
    // 2/(1-s)³ = 16 at s = 1/2
    assert!((geom_partial_closed(10_000, 0.5).unwrap() - 16.0).abs() < 1e-6);
    assert!(!check_eq7(&[5], &[1.5], 100_000, 1e-10).pass);
    assert!(!check_eq7(&[100, 10_000], &[0.9, 0.99], 100_000, 0.0).pass);
}

#[test]
fn identity_examples() {
    let z = AnalyticFn::real_polynomial(&[0.0, 1.0]).unwrap();
    let form = AdjointForm::invariant();
    let spec = QuadratureSpec::default();
    let s = adjoint_series(&z, form, c64(0.5, 0.0)).unwrap();
    let q = adjoint_quad(&z, form, c64(0.5, 0.0), &spec).unwrap().value;
    assert!((s - c64(0.5625, 0.0)).norm() < 1e-15);
    assert!((q - c64(0.5625, 0.0)).norm() < 1e-9);
    assert_eq!(
        adjoint_series(&z, form, c64(0.0, 0.0)).unwrap(),
        c64(0.0, 0.0)
    );

    let r = check_identity(
        &[z, AnalyticFn::LogExtremal],
        &[c64(0.0, 0.0), c64(0.5, 0.0), c64(0.0, 0.8)],
        1e-6,
    );
    assert!(r.pass, "{:?}", r.notes);
    assert!(!check_identity(&[AnalyticFn::LogExtremal], &[c64(0.95, 0.0)], 1e-6).pass);
}

#[test]
fn lemma5_examples() {
    let r = check_lemma5(&[("log".into(), AnalyticFn::LogExtremal)], 1e-6);
    assert!(r.pass);
    assert!((r.metric("max_ratio").unwrap() - 2.0).abs() < 1e-3);

    let r = check_lemma5(
        &[(
            "z".into(),
            AnalyticFn::real_polynomial(&[0.0, 1.0]).unwrap(),
        )],
        1e-6,
    );
    // 2·(4/5)²/√5
    assert!((r.metric("max_ratio").unwrap() - 2.0 * 0.64 / 5f64.sqrt()).abs() < 1e-9);

    let suite = lemma5_suite(1, 50);
    assert_eq!(suite.len(), 13 + 3 + 1 + 50);
    let r = check_lemma5(&suite, 1e-6);
    assert!(r.pass);
    assert!(r
        .notes
        .iter()
        .any(|n| n.contains("z^0") && n.contains("zero seminorm")));
    assert!(!check_lemma5(&[], 1e-6).pass);
}

#[test]
fn lower_bound_examples() {
    let r = check_lower_bound(1e-6);
    assert!(r.pass, "{:?}", r.notes);
    assert!(r.metric("kernel_sup").unwrap() <= 2.0);
    assert_eq!(r.metric("kernel_sup_violations"), Some(0.0));
    let spec = QuadratureSpec::default();
    for rad in [0.5, 0.9] {
        let v =
            truncated_kernel_integral(&AnalyticFn::LogExtremal, c64(0.0, 0.0), rad, &spec).unwrap();
        assert!((v.value - c64(rad * rad, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn growth_examples() {
    let grid = growth_grid();
    assert_eq!(grid.first(), Some(&64));
    assert_eq!(grid.last(), Some(&8192));
    let r = check_growth(-1.0, &grid, 0.15);
    assert!(r.pass);
    let slope = r.metric("slope").unwrap();
    assert!((0.85..=1.15).contains(&slope));
    let r = check_growth(-1.5, &grid, 0.15);
    assert!((0.35..=0.65).contains(&r.metric("slope").unwrap()));

    let z: f64 = 1.0 - 1.0 / 64.0;
    let chained = (1.0 - z * z) * z * geom_partial_closed(64, z * z).unwrap() / cn(64);
    assert!((growth_value(64, -1.0).unwrap() - chained).abs() < 1e-12 * chained);

    assert!(!check_growth(-0.5, &grid, 0.15).pass);
    assert!(!check_growth(-1.0, &[64, 200_000], 0.15).pass);
    assert!(!check_growth(-1.5, &grid, 0.15)
        .metric("slope")
        .map(|s| (s - 1.0).abs() <= 0.15)
        .unwrap());
}

#[test]
fn duality_examples() {
    let r = check_duality(&default_duality_cases(), 1e-12, 1e-5);
    assert!(r.pass, "{:?}", r.notes);
    // 2·(0.9)⁶/3
    assert!((r.metric("case0_prediction_re").unwrap() - 2.0 * 0.9f64.powi(6) / 3.0).abs() < 1e-15);
    assert_eq!(r.metric("case1_prediction_re"), Some(0.0));
    assert_eq!(r.metric("case2_prediction_re"), Some(0.0));
}

#[test]
fn gzn_bloch_examples() {
    let r = check_gzn_bloch(&default_gzn_samples(), 1e-3, false);
    assert!(r.pass);
    assert!(r.informational);
    assert_eq!(r.metric("seminorm_n0_base0_0"), Some(1.0));
    let v = r.metric("seminorm_n5_base0_0").unwrap();
    assert!((v - 1.0 / cn(5)).abs() < 1e-12);
    assert!(r.metric("seminorm_n100_base0.95_0").is_some());

    // A failing informational report does not gate the suite; strict does.
    let mut soft = check_gzn_bloch(&[(0, c64(0.0, 0.0))], -0.5, false);
    assert!(!soft.pass);
    assert!(aggregate_pass(std::slice::from_ref(&soft)));
    soft.informational = false;
    assert!(!aggregate_pass(&[soft]));
}

#[test]
fn run_all_selection_and_tolerances() {
    let mut config = VerifyConfig::default();
    config.select(vec![]).unwrap();
    let reports = run_all(&config);
    assert!(reports.is_empty());
    assert!(aggregate_pass(&reports));

    let mut config = VerifyConfig::default();
    config.select(vec!["growth".into(), "eq7".into()]).unwrap();
    let reports = run_all(&config);
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["eq7", "growth"]);
    assert!(aggregate_pass(&reports));

    for (name, _) in DEFAULT_TOLERANCES {
        config.set_tolerance(name, 0.0).unwrap();
    }
    assert!(!aggregate_pass(&run_all(&config)));
    assert!(config.set_tolerance("eq8", 1.0).is_err());
    assert!(config.set_tolerance("eq7", -1.0).is_err());
    assert!(config.select(vec!["bogus".into()]).is_err());
}
