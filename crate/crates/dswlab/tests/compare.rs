use dswlab::compare::{better_zone, interior_window, loglog_fit, max_error_near_edge, moving_max, pointwise_error, EdgeWindow};
use dswlab::kdv::{Grid1D, GridFunction};
use dswlab::whitham::EdgeState;
use proptest::prelude::*;

fn edge() -> EdgeState {
    EdgeState {
        t: 0.4,
        x_minus: -3.0,
        u: -0.01,
        v: -0.9,
        u_t: 0.14,
        v_t: -0.34,
        c: 8.7,
        phi0: -1.8,
    }
}

#[test]
fn exact_power_law_fit() {
    let eps = [0.08, 0.04, 0.02, 0.01];
    let d: Vec<f64> = eps.iter().map(|e: &f64| 2.5 * e.powf(2.0 / 3.0)).collect();
    let f = loglog_fit(&eps, &d).unwrap();
    assert!((f.a - 2.0 / 3.0).abs() < 1e-12);
    assert!((f.b + 2.5f64.log10()).abs() < 1e-12);
    assert!((f.r - 1.0).abs() < 1e-12);
    assert!(f.sigma_a < 1e-12);
}

/// Slope standard error against the closed form for three points.
#[test]
fn fit_statistics() {
    let x = [0.1f64, 0.01, 0.001];
    let y = [1.0f64, 0.2, 0.05];
    let f = loglog_fit(&x, &y).unwrap();
    let (lx, ly): (Vec<f64>, Vec<f64>) = (x.iter().map(|v| v.log10()).collect(), y.iter().map(|v| v.log10()).collect());
    // abscissae are -1, -2, -3: Sxx = 2
    let a = (ly[0] - ly[2]) / 2.0;
    assert!((f.a - a).abs() < 1e-12);
    let mean_y = ly.iter().sum::<f64>() / 3.0;
    let res: f64 = lx.iter().zip(&ly).map(|(xi, yi)| (yi - mean_y - a * (xi + 2.0)).powi(2)).sum();
    assert!((f.sigma_a - (res / 2.0).sqrt()).abs() < 1e-12);
    assert!(f.r > 0.0 && f.r < 1.0);
}

#[test]
fn fit_rejects_bad_input() {
    assert!(loglog_fit(&[0.1, 0.2], &[1.0, 2.0]).is_err());
    assert!(loglog_fit(&[0.1, 0.1, 0.1], &[1.0, 2.0, 3.0]).is_err());
    assert!(loglog_fit(&[0.1, 0.2, 0.3], &[1.0, -2.0, 3.0]).is_err());
}

proptest! {
    #[test]
    fn fit_invariants(ys in proptest::collection::vec(1e-4f64..10.0, 4)) {
        let f = loglog_fit(&[0.08, 0.04, 0.02, 0.01], &ys).unwrap();
        prop_assert!(f.r.abs() <= 1.0);
        prop_assert!(f.sigma_a >= 0.0);
    }
}

fn field(eps: f64) -> GridFunction {
    GridFunction::sample(Grid1D::new(15.0, 4096).unwrap(), 0.4, eps, |x| (3.0 * x).sin() * (-x * x).exp())
}

#[test]
fn identical_inputs_give_zero_error() {
    let u = field(0.05);
    let f = |x: f64| Ok((3.0 * x).sin() * (-x * x).exp());
    let p = pointwise_error(&u, f, -2.0, 2.0).unwrap();
    assert!(p.error.iter().all(|&e| e == 0.0));
    assert!(p.x.iter().all(|&x| (-2.0..=2.0).contains(&x)));
    assert_eq!(max_error_near_edge(&u, f, &edge(), EdgeWindow::default()).unwrap(), 0.0);
    assert!(pointwise_error(&u, f, -20.0, 0.0).is_err());
}

#[test]
fn edge_window_in_painleve_units() {
    let e = edge();
    let w = EdgeWindow { z_half_width: 1.0 };
    let eps: f64 = 0.01;
    let h = w.half_width(&e, eps);
    // z = (v_t/(6(u-v)))^{1/3} y with y = ε^{-2/3}(x - x⁻)
    let z = (e.v_t / (6.0 * (e.u - e.v))).cbrt() * h / eps.powf(2.0 / 3.0);
    assert!((z.abs() - 1.0).abs() < 1e-12);
    assert_eq!(interior_window(0.0, 3.0), (1.0, 2.0));
}

#[test]
fn moving_max_is_centered() {
    let e = [0.0, 0.0, -5.0, 0.0, 0.0, 1.0, 0.0];
    assert_eq!(moving_max(&e, 3), vec![0.0, 5.0, 5.0, 5.0, 1.0, 1.0, 1.0]);
    assert_eq!(moving_max(&e, 1), e.iter().map(|v| v.abs()).collect::<Vec<_>>());
}

/// Synthetic errors: the multiscale error is small on [x⁻ - 0.3, x⁻ + 0.1]
/// and large elsewhere; the elliptic error is the reverse.
#[test]
fn zone_recovers_synthetic_crossings() {
    let e = edge();
    let eps = 0.02;
    let u = GridFunction::sample(Grid1D::new(15.0, 16384).unwrap(), 0.4, eps, |_| 0.0);
    let inside = |x: f64| x > e.x_minus - 0.3 && x < e.x_minus + 0.1;
    let osc = |x: f64| (x / eps).cos();
    let ms = |x: f64| Ok(if inside(x) { 0.01 } else { 0.1 } * osc(x));
    let ell = |x: f64| Ok(if inside(x) { 0.1 } else { 0.01 } * osc(x));
    let z = better_zone(&u, ms, ell, &e).unwrap();
    assert!(z.closed());
    let wavelength = std::f64::consts::PI * eps / (e.u - e.v).sqrt();
    assert!((z.left - (e.x_minus - 0.3)).abs() < wavelength, "left {}", z.left);
    assert!((z.right - (e.x_minus + 0.1)).abs() < wavelength, "right {}", z.right);
    assert!(z.left < e.x_minus && e.x_minus < z.right);
}

#[test]
fn zone_is_open_when_multiscale_never_wins() {
    let e = edge();
    let eps = 0.02;
    let u = GridFunction::sample(Grid1D::new(15.0, 16384).unwrap(), 0.4, eps, |_| 0.0);
    let z = better_zone(&u, |x| Ok((x / eps).cos()), |_| Ok(0.0), &e).unwrap();
    assert!(!z.left_closed && !z.right_closed);
    let range = 10.0 * eps.powf(2.0 / 3.0);
    assert!((z.width() - 2.0 * range).abs() < 1e-12);
}
