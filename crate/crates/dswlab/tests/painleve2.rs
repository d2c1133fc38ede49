//! Hastings–McLeod solver against an independent Numerov/Newton BVP oracle.

use dswlab::painleve2::{self, HmConfig, RightTail};
use dswlab::specfun::airy_ai;
use std::sync::OnceLock;

mod common;
use common::numerov_oracle;

fn solution() -> &'static painleve2::HastingsMcLeodSolution {
    static SOL: OnceLock<painleve2::HastingsMcLeodSolution> = OnceLock::new();
    SOL.get_or_init(|| painleve2::solve(&HmConfig::default()).expect("default solve"))
}

#[test]
fn value_at_origin() {
    let a0 = solution().eval(0.0);
    assert!((a0 - 0.36706).abs() < 1e-4, "A(0) = {a0}");
}

#[test]
fn collocation_residual_and_resolution() {
    let sol = solution();
    assert!(sol.max_collocation_residual() < 1e-8);
    assert!(sol.core.tail_ratio() < 1e-10);
}

#[test]
fn oversampled_interior_residual() {
    let sol = solution();
    let (zl, zr) = (sol.core.z_left + 0.5, sol.core.z_right - 0.5);
    let m = 10 * 128;
    let worst = (0..=m)
        .map(|i| sol.residual(zl + (zr - zl) * i as f64 / m as f64).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn agrees_with_numerov_oracle() {
    let sol = solution();
    let (z, a) = numerov_oracle(-10.0, 10.0, 8000);
    let worst = z
        .iter()
        .zip(&a)
        .filter(|(z, _)| z.abs() <= 8.0)
        .map(|(&z, &a)| (sol.eval(z) - a).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn boundary_values_and_tails() {
    let sol = solution();
    assert!((sol.eval(-10.0) - painleve2::hm_boundary_left(-10.0).unwrap()).abs() < 1e-10);
    let expect = 15f64.sqrt()
        - 30f64.powf(-2.5) / (8.0 * 2f64.sqrt())
        - 73.0 * 30f64.powf(-5.5) / (128.0 * 2f64.sqrt());
    assert!((sol.eval(-30.0) - expect).abs() < 1e-15);
    assert!((sol.eval(5.0) / airy_ai(5.0) - 1.0).abs() < 1e-3);
    // continuity at both seams
    for z in [sol.core.z_left, sol.core.z_right] {
        let inside = sol.core.eval(z);
        let outside = sol.eval(z + 1e-12 * z.signum());
        assert!((inside - outside).abs() < 1e-8);
    }
}

#[test]
fn positive_and_monotone_on_right_half() {
    let sol = solution();
    let mut prev = f64::INFINITY;
    for i in 0..=1000 {
        let z = 10.0 * i as f64 / 1000.0;
        let a = sol.eval(z);
        assert!(a > 0.0 && a < prev, "z = {z}");
        prev = a;
    }
    for i in 0..=400 {
        assert!(sol.eval(-20.0 + 0.1 * i as f64) > 0.0);
    }
}

#[test]
fn left_tail_correction_scale() {
    let sol = solution();
    let coeff = 1.0 / (8.0 * 2f64.sqrt());
    for z in [-10.0, -9.0, -8.0, -7.0, -6.0] {
        let w: f64 = -z;
        let gap = (w / 2.0).sqrt() - sol.eval(z);
        let ratio = gap / (coeff * w.powf(-2.5));
        assert!(ratio > 0.5 && ratio < 2.0, "z = {z}: ratio {ratio}");
    }
}

#[test]
fn full_airy_tail_is_equally_accurate() {
    let airy = painleve2::solve(&HmConfig {
        right_tail: RightTail::Airy,
        ..HmConfig::default()
    })
    .unwrap();
    let base = solution();
    for z in [10.5, 12.0, 20.0] {
        assert!((airy.eval(z) - base.eval(z)).abs() < 1e-6);
    }
    assert_eq!(airy.right_tail, RightTail::Airy);
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let err = painleve2::solve(&HmConfig {
        max_iterations: 10,
        ..HmConfig::default()
    })
    .unwrap_err();
    assert!(matches!(err, dswlab::Error::NoConvergence { iterations: 10, .. }));
}
