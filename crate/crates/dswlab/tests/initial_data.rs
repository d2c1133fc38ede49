//! Initial data: closed-form branches, validation, breakup, Hopf solution.

use dswlab::initial_data::{breakup, hopf_solve, validate, HopfSolution, InitialDataModel, Profile, Sech2};
use proptest::prelude::*;

fn sampled(f: impl Fn(f64) -> f64, l: f64, n: usize) -> InitialDataModel {
    let xs: Vec<f64> = (0..=n).map(|i| -l + 2.0 * l * i as f64 / n as f64).collect();
    let us: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    InitialDataModel::from_samples("test", &xs, &us).unwrap()
}

fn sech2(x: f64) -> f64 {
    -1.0 / x.cosh().powi(2)
}

#[test]
fn breakup_of_sech2() {
    let b = breakup(&InitialDataModel::sech2()).unwrap();
    // analytic: maximise 12 sech²ξ |tanh ξ| at tanh ξ = -1/√3
    let t_c = 3f64.sqrt() / 8.0;
    let xi_c = -(1.0 / 3f64.sqrt()).atanh();
    assert!((b.t_c - t_c).abs() < 1e-12);
    assert!((b.xi_c - xi_c).abs() < 1e-6);
    assert!((b.u_c + 2.0 / 3.0).abs() < 1e-10);
    assert!((b.x_c - (6.0 * t_c * (-2.0 / 3.0) + xi_c)).abs() < 1e-10);
    // published values
    assert!((b.t_c - 0.216).abs() < 1e-3 && (b.x_c + 1.524).abs() < 2e-3);
}

#[test]
fn branch_derivatives_by_finite_differences() {
    let p = Sech2;
    for u in [-0.9f64, -0.66, -0.4, -0.1, -0.01] {
        let h = 1e-4 * u.abs().min(1.0 + u);
        let d1 = (p.f_minus(u + h) - p.f_minus(u - h)) / (2.0 * h);
        let d2 = (p.f_minus_d1(u + h) - p.f_minus_d1(u - h)) / (2.0 * h);
        let d3 = (p.f_minus_d2(u + h) - p.f_minus_d2(u - h)) / (2.0 * h);
        assert!((p.f_minus_d1(u) / d1 - 1.0).abs() < 1e-7, "u = {u}");
        assert!((p.f_minus_d2(u) / d2 - 1.0).abs() < 1e-6, "u = {u}");
        assert!((p.f_minus_d3(u) / d3 - 1.0).abs() < 1e-6, "u = {u}");
    }
    let d3c = p.f_minus_d3(-2.0 / 3.0);
    assert!((d3c + 8.768_507_213_317_443).abs() < 1e-10);
}

#[test]
fn round_trip_through_branches() {
    let m = InitialDataModel::sech2();
    for i in 1..1000 {
        let u = -1.0 + i as f64 / 1000.0;
        assert!((m.u0(m.f_minus(u).unwrap()) - u).abs() < 1e-10);
        assert!((m.u0(m.f_plus(u).unwrap()) - u).abs() < 1e-10);
    }
}

#[test]
fn sech2_is_admissible() {
    let r = validate(&InitialDataModel::sech2());
    assert!(r.passed(), "{r:?}");
    assert!(r.required_rescaling.is_none());
}

#[test]
fn doubled_amplitude_fails_normalisation() {
    let m = sampled(|x| 2.0 * sech2(x), 15.0, 3000);
    let r = validate(&m);
    assert!(!r.check("normalisation").unwrap().passed);
    let (scale, shift) = r.required_rescaling.unwrap();
    assert!((scale - 2.0).abs() < 1e-6 && shift.abs() < 1e-6);
    assert!(r.into_result().is_err());
}

#[test]
fn two_wells_fail_single_minimum() {
    let m = sampled(|x| sech2(x) + sech2(x - 5.0), 15.0, 3000);
    let r = validate(&m);
    assert!(!r.check("single minimum").unwrap().passed, "{r:?}");
}

#[test]
fn sampled_sech2_matches_closed_form() {
    let m = sampled(sech2, 15.0, 6000);
    let r = validate(&m);
    assert!(r.check("normalisation").unwrap().passed, "{r:?}");
    let exact = InitialDataModel::sech2();
    for u in [-0.9, -0.5, -0.2] {
        assert!((m.f_minus(u).unwrap() - exact.f_minus(u).unwrap()).abs() < 1e-6);
        assert!((m.f_plus(u).unwrap() - exact.f_plus(u).unwrap()).abs() < 1e-6);
    }
    let b = breakup(&m).unwrap();
    assert!((b.t_c - 3f64.sqrt() / 8.0).abs() < 1e-5);
}

/// Coarse samples still give sign-correct, accurate f₋″ and f₋‴ (the
/// leading-edge seed and the admissibility check both depend on them).
#[test]
fn sampled_higher_derivatives_are_smooth() {
    let m = sampled(sech2, 15.0, 600);
    let r = validate(&m);
    assert!(r.passed(), "{r:?}");
    let (p, exact) = (m.profile(), Sech2);
    for u in [-0.99, -0.9, -0.7, -0.5, -0.3, -0.1, -0.01] {
        let (d2, d3) = (p.f_minus_d2(u), p.f_minus_d3(u));
        assert!((d2 / exact.f_minus_d2(u) - 1.0).abs() < 0.03, "u={u} d2={d2}");
        assert!((d3 / exact.f_minus_d3(u) - 1.0).abs() < 0.03, "u={u} d3={d3}");
    }
}

#[test]
fn file_round_trip_and_line_numbered_errors() {
    let dir = std::env::temp_dir().join(format!("dswlab-id-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    let mut text = String::from("# x u0\n");
    for i in 0..=3000 {
        let x = -15.0 + 30.0 * i as f64 / 3000.0;
        text.push_str(&format!("{x:.17e} {:.17e}\n", sech2(x)));
    }
    std::fs::write(&good, text).unwrap();
    let m = InitialDataModel::from_spec(&format!("file:{}", good.display())).unwrap();
    assert!((m.u0(0.3) - sech2(0.3)).abs() < 1e-6);

    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "0 -1\n1 oops\n").unwrap();
    let err = InitialDataModel::from_file(&bad).unwrap_err().to_string();
    assert!(err.contains(":2:"), "{err}");
}

#[test]
fn hopf_at_time_zero_is_identity() {
    let m = InitialDataModel::sech2();
    for x in [-3.0, -0.5, 0.0, 1.2] {
        let b = hopf_solve(&m, x, 0.0).unwrap().single().unwrap();
        assert_eq!(b.u, m.u0(x));
    }
}

#[test]
fn hopf_at_breakup_detects_blowup() {
    let m = InitialDataModel::sech2();
    let b = breakup(&m).unwrap();
    let sol = hopf_solve(&m, b.x_c, b.t_c).unwrap();
    let branches = sol.branches();
    assert!(branches.iter().all(|br| (br.u + 2.0 / 3.0).abs() < 1e-3));
    assert!(branches.iter().any(|br| br.gradient_blowup));
}

#[test]
fn breakup_is_the_limit_of_single_valuedness() {
    let m = InitialDataModel::sech2();
    let b = breakup(&m).unwrap();
    // the fold opens like (t - t_c)^{3/2}: sample finely around x_c
    let multivalued_somewhere = |t: f64| {
        (0..=2000)
            .map(|i| b.x_c - 0.05 + 0.1 * i as f64 / 2000.0)
            .any(|x| matches!(hopf_solve(&m, x, t).unwrap(), HopfSolution::Multivalued(_)))
    };
    assert!(!multivalued_somewhere(b.t_c - 1e-3));
    assert!(multivalued_somewhere(b.t_c + 1e-3));
}

#[test]
fn hopf_solves_the_pde() {
    let m = InitialDataModel::sech2();
    let u = |x: f64, t: f64| hopf_solve(&m, x, t).unwrap().single().unwrap().u;
    // fourth-order central differences
    let d = |f: &dyn Fn(f64) -> f64, s: f64, h: f64| (f(s - 2.0 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2.0 * h)) / (12.0 * h);
    for t in [0.05, 0.12, 0.18] {
        for x in [-3.0, -2.0, -1.0, 0.0, 1.0, 2.5] {
            let ut = d(&|s| u(x, s), t, 2.5e-4);
            let ux = d(&|s| u(s, t), x, 2.5e-4);
            assert!((ut + 6.0 * u(x, t) * ux).abs() < 1e-7, "x = {x}, t = {t}: {}", ut + 6.0 * u(x, t) * ux);
        }
    }
}

#[test]
fn left_of_leading_edge_is_single_valued() {
    let m = InitialDataModel::sech2();
    for x in [-8.0, -5.0, -3.3] {
        assert!(hopf_solve(&m, x, 0.4).unwrap().single().is_some());
    }
}

proptest! {
    #[test]
    fn characteristic_relation_holds(x in -6.0f64..6.0, t in 0.0f64..0.6) {
        let m = InitialDataModel::sech2();
        for b in hopf_solve(&m, x, t).unwrap().branches() {
            prop_assert!((6.0 * t * m.u0(b.xi) + b.xi - x).abs() < 1e-12);
        }
    }
}
