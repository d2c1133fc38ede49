//! Whitham modulation: q, Φ, speeds, hodograph solve, edges and zone.

use dswlab::initial_data::{breakup, InitialDataModel};
use dswlab::whitham::*;
use proptest::prelude::*;
use std::sync::OnceLock;

mod common;
use common::q_oracle;

fn model() -> InitialDataModel {
    InitialDataModel::sech2()
}

fn zone_04() -> &'static WhithamZone {
    static Z: OnceLock<WhithamZone> = OnceLock::new();
    Z.get_or_init(|| WhithamZone::build(&model(), 0.4).unwrap())
}

#[test]
fn q_matches_nested_adaptive_quadrature() {
    for b in [[-0.2, -0.5, -0.8], [-0.05, -0.3, -0.6], [-0.4, -0.41, -0.9]] {
        let q = q_epd(&model(), b[0], b[1], b[2]).unwrap();
        let o = q_oracle(b[0], b[1], b[2]);
        assert!((q - o).abs() < 1e-9, "{b:?}: {q} vs {o}");
    }
}

#[test]
fn q_on_the_diagonal_is_the_branch() {
    let m = model();
    for b in [-0.9, -0.5, -0.1] {
        let q = q_epd(&m, b, b, b).unwrap();
        assert!((q - m.f_minus(b).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn q_gradient_by_finite_differences() {
    let m = model();
    let b = [-0.15, -0.45, -0.75];
    let g = q_partials(&m, b).unwrap().grad;
    let h = 1e-5;
    for i in 0..3 {
        let (mut bp, mut bm) = (b, b);
        bp[i] += h;
        bm[i] -= h;
        let fd = (q_partials(&m, bp).unwrap().q - q_partials(&m, bm).unwrap().q) / (2.0 * h);
        assert!((g[i] - fd).abs() < 1e-7, "i = {i}: {} vs {fd}", g[i]);
    }
}

#[test]
fn q_satisfies_euler_poisson_darboux() {
    let m = model();
    let b = [-0.2, -0.45, -0.7];
    let h = 1e-5;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (mut bp, mut bm) = (b, b);
        bp[j] += h;
        bm[j] -= h;
        let qij = (q_partials(&m, bp).unwrap().grad[i] - q_partials(&m, bm).unwrap().grad[i]) / (2.0 * h);
        let g = q_partials(&m, b).unwrap().grad;
        let r = 2.0 * (b[i] - b[j]) * qij - (g[i] - g[j]);
        assert!(r.abs() < 1e-6, "({i}, {j}): {r}");
    }
}

#[test]
fn tensor_and_split_forms_agree_before_the_hump() {
    let m = model();
    for b in [[-0.2, -0.5, -0.8], [-0.05, -0.3, -0.97], [-0.4, -0.41, -0.6]] {
        let t = q_partials(&m, b).unwrap();
        let s = q_split(&m, b[0], b[1], m.f_minus(b[2]).unwrap()).unwrap();
        assert!((t.q - s.q).abs() < 1e-10, "{b:?}");
        for i in 0..3 {
            assert!((t.grad[i] - s.grad[i]).abs() < 1e-8 * (1.0 + t.grad[i].abs()), "{b:?} {i}");
        }
    }
}

#[test]
fn split_form_is_smooth_across_the_hump() {
    // q(X₃) through X₃ = 0: a cubic fit through points on both sides predicts the middle
    let m = model();
    let q = |x3: f64| q_split(&m, -0.2, -0.4, x3).unwrap().q;
    let h = 0.02;
    let pred = (-q(-3.0 * h) + 9.0 * q(-h) + 9.0 * q(h) - q(3.0 * h)) / 16.0;
    assert!((pred - q(0.0)).abs() < 1e-6);
}

#[test]
fn leading_edge_identities() {
    let m = model();
    for (u, v) in [(-0.3, -0.7), (-0.05, -0.85), (-0.6, -0.7)] {
        let g = q_partials(&m, [u, v, v]).unwrap();
        // f₋(u) = 2(u - v)∂_u q(u, v, v) + q(u, v, v)
        let e1 = 2.0 * (u - v) * g.grad[0] + g.q - m.f_minus(u).unwrap();
        assert!(e1.abs() < 1e-8, "eqex1 at ({u}, {v}): {e1}");
        // Φ(v, u) = d/dv q(u, v, v) + ∂_u q(u, v, v)
        let e2 = g.grad[1] + g.grad[2] + g.grad[0] - phi(&m, v, u).unwrap();
        assert!(e2.abs() < 1e-8, "eqex2 at ({u}, {v}): {e2}");
    }
}

#[test]
fn phi_identity_in_u() {
    let m = model();
    for (u, v) in [(-0.3, -0.7), (-0.1, -0.9)] {
        let h = 1e-5;
        let du = (phi(&m, v, u + h).unwrap() - phi(&m, v, u - h).unwrap()) / (2.0 * h);
        let rhs = (phi(&m, v, u).unwrap() - phi(&m, u, u).unwrap()) / (2.0 * (v - u));
        assert!((du - rhs).abs() < 1e-6, "{du} vs {rhs}");
        assert!((phi_derivs(&m, v, u).unwrap().du - du).abs() < 1e-6);
    }
}

#[test]
fn phi_derivatives_by_finite_differences() {
    let m = model();
    let (u, v) = (-0.2, -0.75);
    let d = phi_derivs(&m, v, u).unwrap();
    let h = 1e-5;
    let p = |v: f64, u: f64| phi_derivs(&m, v, u).unwrap();
    assert!((d.dv - (p(v + h, u).value - p(v - h, u).value) / (2.0 * h)).abs() < 1e-7);
    assert!((d.dvv - (p(v + h, u).dv - p(v - h, u).dv) / (2.0 * h)).abs() < 1e-6);
    assert!((d.duv - (p(v, u + h).dv - p(v, u - h).dv) / (2.0 * h)).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn q_is_symmetric(a in -0.95f64..-0.05, b in -0.95f64..-0.05, c in -0.95f64..-0.05) {
        let m = model();
        let q0 = q_partials(&m, [a, b, c]).unwrap();
        for perm in [[b, a, c], [c, b, a], [a, c, b], [b, c, a]] {
            prop_assert!((q_partials(&m, perm).unwrap().q - q0.q).abs() < 1e-10);
        }
    }

    #[test]
    fn phi_on_the_diagonal_is_the_branch_derivative(u in -0.95f64..-0.02) {
        let m = model();
        let e = phi(&m, u, u).unwrap() / m.f_minus_prime(u).unwrap() - 1.0;
        prop_assert!(e.abs() < 1e-12);
    }
}

#[test]
fn speeds_at_the_leading_edge() {
    let m = model();
    let (u, v) = (-0.2, -0.7);
    let tr = WhithamTriple::from_modulus(&m, u, m.f_minus(v).unwrap(), 1e-14, 1.0 - 1e-14).unwrap();
    let s = whitham_speeds(&tr).unwrap();
    assert!((s[0] - 6.0 * u).abs() < 1e-10, "{s:?}");
    assert!((s[1] - (12.0 * v - 6.0 * u)).abs() < 1e-10);
    assert!((s[2] - (12.0 * v - 6.0 * u)).abs() < 1e-10);
}

#[test]
fn speeds_at_the_trailing_edge() {
    // s → 1: v₁ - 2Σ = 4(1-s²)(β₁-β₃)K/E with K ≈ ln(4/s'), E ≈ 1
    let m = model();
    let (b1, b3) = (-0.2, -0.8);
    for s2c in [1e-6, 1e-9] {
        let tr = WhithamTriple::from_modulus(&m, b1, m.f_minus(b3).unwrap(), 1.0 - s2c, s2c).unwrap();
        let sp = whitham_speeds(&tr).unwrap();
        let sum2 = 2.0 * tr.sum();
        let k = (4.0 / s2c.sqrt()).ln();
        let series = 4.0 * s2c * (b1 - b3) * k;
        assert!((sp[0] - sum2 - series).abs() < 1e-2 * series, "{s2c}: {}", sp[0] - sum2);
        assert!((sp[0] - sp[1]).abs() < 20.0 * series);
        assert!(sp[1] > sp[2]);
    }
}

#[test]
fn leading_edge_at_comparison_time() {
    let e = solve_leading_edge(&model(), 0.4).unwrap();
    // published value
    assert!((e.x_minus + 3.2297).abs() < 5e-4, "{}", e.x_minus);
    assert!(e.v_t < 0.0 && e.c > 0.0);
    // the edge system itself
    let m = model();
    let d = phi_derivs(&m, e.v, e.u).unwrap();
    assert!((d.value + 2.4).abs() < 1e-10 && d.dv.abs() < 1e-10);
    assert!((6.0 * 0.4 * e.u + m.f_minus(e.u).unwrap() - e.x_minus).abs() < 1e-12);
}

#[test]
fn leading_edge_near_breakup() {
    let m = model();
    let b = breakup(&m).unwrap();
    let e = solve_leading_edge(&m, b.t_c + 1e-8).unwrap();
    assert!((e.u + 2.0 / 3.0).abs() < 1e-3 && (e.v + 2.0 / 3.0).abs() < 1e-3);
    assert!((e.x_minus - b.x_c).abs() < 1e-6);
    assert_eq!(phase_phi0(&m, b.t_c).unwrap(), 0.0);
}

#[test]
fn edge_signs_along_the_trajectory() {
    let tr = EdgeTrajectory::build(&model(), 0.4, 1000).unwrap();
    for s in tr.states().unwrap() {
        assert!(s.v_t < 0.0 && s.c > 0.0, "t = {}", s.t);
        assert!(s.u > s.v);
    }
}

#[test]
fn edge_velocity_is_the_double_characteristic_speed() {
    // dx⁻/dt = 12v - 6u, and the stored u_t, v_t match finite differences
    let tr = EdgeTrajectory::build(&model(), 0.4, 1000).unwrap();
    let (t, h) = (0.3, 1e-5);
    let (a, b, c) = (tr.state_at(t - h).unwrap(), tr.state_at(t).unwrap(), tr.state_at(t + h).unwrap());
    assert!(((c.x_minus - a.x_minus) / (2.0 * h) - (12.0 * b.v - 6.0 * b.u)).abs() < 1e-6);
    assert!(((c.u - a.u) / (2.0 * h) - b.u_t).abs() < 1e-6);
    assert!(((c.v - a.v) / (2.0 * h) - b.v_t).abs() < 1e-6);
}

#[test]
fn phase_derivative() {
    let tr = EdgeTrajectory::build(&model(), 0.4, 1000).unwrap();
    for t in [0.25, 0.33, 0.39] {
        let h = 1e-4;
        let ph = |t: f64| tr.phase(t).unwrap();
        let fd = (ph(t - 2.0 * h) - 8.0 * ph(t - h) + 8.0 * ph(t + h) - ph(t + 2.0 * h)) / (12.0 * h);
        let s = tr.state_at(t).unwrap();
        let exact = -16.0 * (s.u - s.v).powf(1.5);
        assert!((fd - exact).abs() < 1e-6, "t = {t}: {fd} vs {exact}");
    }
}

#[test]
fn phase_against_richardson_trapezoid() {
    // ∫ in σ = (τ - t_c)^{1/4}; the integrand is smooth and vanishes at σ = 0
    let m = model();
    let tr = EdgeTrajectory::build(&m, 0.4, 1000).unwrap();
    let tc = tr.breakup().t_c;
    let smax = (0.4f64 - tc).powf(0.25);
    let g = |s: f64| {
        if s == 0.0 {
            return 0.0;
        }
        let e = tr.state_at(tc + s.powi(4)).unwrap();
        -64.0 * s.powi(3) * (e.u - e.v).powf(1.5)
    };
    let trap = |n: usize| {
        let h = smax / n as f64;
        let inner: f64 = (1..n).map(|k| g(k as f64 * h)).sum();
        h * (inner + 0.5 * (g(0.0) + g(smax)))
    };
    let (t1, t2, t3) = (trap(64), trap(128), trap(256));
    let r1 = (4.0 * t2 - t1) / 3.0;
    let r2 = (4.0 * t3 - t2) / 3.0;
    let oracle = (16.0 * r2 - r1) / 15.0;
    let phi0 = phase_phi0(&m, 0.4).unwrap();
    assert!(phi0 < 0.0);
    assert!((phi0 - oracle).abs() < 1e-8, "{phi0} vs {oracle}");
}

#[test]
fn zone_continuation_across_ten_cubed_points() {
    let m = model();
    let z = zone_04();
    let (xm, xp) = (z.x_minus(), z.x_plus());
    assert!(xp > xm);
    let n = 1000;
    for k in 1..n {
        let x = xm + (xp - xm) * k as f64 / n as f64;
        let r = z.solve_at(x).unwrap();
        assert!(r.residual_norm < 1e-9);
        let d = hodograph_defect(&m, &r.triple, x, 0.4).unwrap();
        assert!(d.iter().all(|e| e.abs() < 1e-8), "x = {x}: {d:?}");
        let v = whitham_speeds(&r.triple).unwrap();
        assert!(v[0] > v[1] && v[1] > v[2], "x = {x}: {v:?}");
    }
}

#[test]
fn zone_meets_the_leading_edge_data() {
    let z = zone_04();
    let e = z.edge();
    let r = z.solve_at(e.x_minus + 1e-9).unwrap().triple;
    assert!((r.beta1 - e.u).abs() < 1e-7);
    assert!((r.beta2 - e.v).abs() < 1e-4 && (r.beta3 - e.v).abs() < 1e-4);
}

#[test]
fn trailing_edge_joins_the_hopf_solution() {
    let m = model();
    let n = zone_04().trailing();
    assert!((n.beta1 - n.beta2).abs() < 1e-9);
    // β₃ is the Hopf solution at x⁺: x⁺ = 6tβ₃ + X₃
    assert!((6.0 * 0.4 * n.beta3 + n.foot3 - n.x).abs() < 1e-9);
    assert!((m.u0(n.foot3) - n.beta3).abs() < 1e-14);
}

#[test]
fn small_amplitude_laws() {
    let z = zone_04();
    let e = *z.edge();
    let m = model();
    let d1 = m.f_minus_prime(e.u).unwrap();
    for dx in [1e-3, 1e-4, 1e-5, 1e-6] {
        let tr = z.solve_at(e.x_minus + dx).unwrap().triple;
        let delta_big = tr.beta1 - e.u;
        let delta = 0.5 * (tr.beta2 - tr.beta3);
        let err_big = (delta_big / (dx / (6.0 * 0.4 + d1)) - 1.0).abs();
        let err = (delta / (dx / e.c).sqrt() - 1.0).abs();
        // relative errors fall off linearly in x - x⁻ down to the solver floor
        assert!(err_big < 2.0 * dx + 5e-6, "Δ at dx = {dx}: {err_big}");
        assert!(err < 2.0 * dx + 5e-6, "δ at dx = {dx}: {err}");
    }
}

#[test]
fn zone_width_grows() {
    let m = model();
    let ts: Vec<f64> = (0..=15).map(|k| 0.25 + 0.01 * k as f64).collect();
    let trail = trailing_edge_path(&m, &ts).unwrap();
    let traj = EdgeTrajectory::build(&m, 0.4, 1000).unwrap();
    let widths: Vec<f64> = ts
        .iter()
        .zip(&trail)
        .map(|(&t, n)| n.x - traj.state_at(t).unwrap().x_minus)
        .collect();
    assert!(widths.windows(2).all(|w| w[1] > w[0]), "{widths:?}");
    // the path agrees with an independent zone build
    assert!((trail[trail.len() - 1].x - zone_04().x_plus()).abs() < 1e-7);
}

#[test]
fn zone_collapses_at_breakup() {
    let m = model();
    let b = breakup(&m).unwrap();
    let z = WhithamZone::build(&m, b.t_c + 1e-6).unwrap();
    assert!((z.x_minus() - b.x_c).abs() < 1e-3 && (z.x_plus() - b.x_c).abs() < 1e-3);
}

#[test]
fn continuation_in_x_and_in_t_agree() {
    let m = model();
    let x = -2.6;
    let z = WhithamZone::build(&m, 0.38).unwrap();
    let mut tr = z.solve_at(x).unwrap().triple;
    for k in 1..=10 {
        let t = 0.38 + 0.002 * k as f64;
        tr = solve_whitham(&m, x, t, &tr).unwrap().triple;
    }
    let direct = zone_04().solve_at(x).unwrap().triple;
    for (a, b) in tr.betas().iter().zip(direct.betas()) {
        assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }
}

#[test]
fn hump_time_is_the_trailing_foot_crossing() {
    let m = model();
    let t_hump = hump_time(&m).unwrap().unwrap();
    let b = breakup(&m).unwrap();
    assert!(t_hump > b.t_c && t_hump < 0.4);
    let n = trailing_edge(&m, t_hump).unwrap();
    assert!(n.foot3.abs() < 1e-8 && (n.beta3 + 1.0).abs() < 1e-12);
    assert!((n.x + 6.0 * t_hump).abs() < 1e-8);
    // cached
    assert_eq!(m.hump_time(), Some(Some(t_hump)));
}
