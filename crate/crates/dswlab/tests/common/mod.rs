//! Independent oracles shared by the test targets.
#![allow(dead_code)]

use dswlab::initial_data::InitialDataModel;
use dswlab::painleve2;
use dswlab::quad::adaptive;
use std::f64::consts::PI;

/// Fourth-order Numerov discretisation of A″ = zA + 2A³ with the same
/// Dirichlet data, solved by Newton with a tridiagonal (Thomas) solve.
pub fn numerov_oracle(zl: f64, zr: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (zr - zl) / m as f64;
    let z: Vec<f64> = (0..=m).map(|i| zl + i as f64 * h).collect();
    let mut a: Vec<f64> = z.iter().map(|&z| painleve2::initial_iterate(z)).collect();
    a[0] = painleve2::hm_boundary_left(zl).unwrap();
    a[m] = painleve2::hm_boundary_right(zr).unwrap();
    let g = |z: f64, a: f64| z * a + 2.0 * a * a * a;
    let dg = |z: f64, a: f64| z + 6.0 * a * a;
    let c = h * h / 12.0;
    for _ in 0..50 {
        let n = m - 1;
        let (mut lo, mut di, mut up, mut rhs) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for k in 0..n {
            let i = k + 1;
            rhs[k] = -(a[i + 1] - 2.0 * a[i] + a[i - 1]
                - c * (g(z[i + 1], a[i + 1]) + 10.0 * g(z[i], a[i]) + g(z[i - 1], a[i - 1])));
            lo[k] = 1.0 - c * dg(z[i - 1], a[i - 1]);
            di[k] = -2.0 - 10.0 * c * dg(z[i], a[i]);
            up[k] = 1.0 - c * dg(z[i + 1], a[i + 1]);
        }
        for k in 1..n {
            let w = lo[k] / di[k - 1];
            di[k] -= w * up[k - 1];
            rhs[k] -= w * rhs[k - 1];
        }
        let mut dx = vec![0.0; n];
        dx[n - 1] = rhs[n - 1] / di[n - 1];
        for k in (0..n - 1).rev() {
            dx[k] = (rhs[k] - up[k] * dx[k + 1]) / di[k];
        }
        let step = dx.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        for k in 0..n {
            a[k + 1] += dx[k];
        }
        if step < 1e-14 {
            break;
        }
    }
    (z, a)
}

/// q from the defining double integral over (μ, ν) ∈ [-1, 1]², with
/// ν = cos θ and μ = 1 - τ² absorbing the inverse square roots.
pub fn q_oracle(b1: f64, b2: f64, b3: f64) -> f64 {
    let m = InitialDataModel::sech2();
    let outer = adaptive(0.0, PI, 1e-12, |th| {
        let nu = th.cos();
        let lam = 0.5 * (1.0 + nu) * b1 + 0.5 * (1.0 - nu) * b2;
        adaptive(0.0, 2f64.sqrt(), 1e-12, |tau| {
            let mu = 1.0 - tau * tau;
            2.0 * m.f_minus(0.5 * (1.0 + mu) * lam + 0.5 * (1.0 - mu) * b3).unwrap()
        })
        .unwrap()
    })
    .unwrap();
    outer / (2.0 * 2f64.sqrt() * PI)
}

/// K(s) from its defining integral.
pub fn k_by_quadrature(s: f64) -> f64 {
    adaptive(0.0, PI / 2.0, 1e-14, |t| 1.0 / (1.0 - (s * t.sin()).powi(2)).sqrt()).unwrap()
}

/// E(s) from its defining integral.
pub fn e_by_quadrature(s: f64) -> f64 {
    adaptive(0.0, PI / 2.0, 1e-14, |t| (1.0 - (s * t.sin()).powi(2)).sqrt()).unwrap()
}
