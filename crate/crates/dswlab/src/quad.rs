//! Quadrature rules: Gauss–Legendre, Gauss–Chebyshev (midpoint angles),
//! tanh–sinh, and an adaptive Gauss–Legendre driver.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            nodes[n - 1 - i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// ∫_a^b f.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }

    /// Positive half of the 2n-point rule: exact for even polynomials on [0, 1].
    pub fn half_range(n: usize) -> Self {
        let full = GaussLegendre::new(2 * n);
        let (nodes, weights) = full
            .nodes
            .iter()
            .zip(&full.weights)
            .filter(|(&x, _)| x > 0.0)
            .map(|(&x, &w)| (x, w))
            .unzip();
        GaussLegendre { nodes, weights }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Midpoint angles θ_j = (j + ½)π/n, j = 0..n: the Gauss–Chebyshev rule for
/// ∫_{-1}^{1} g(ν)/√(1-ν²) dν = (π/n) Σ g(cos θ_j).
pub fn chebyshev_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| (j as f64 + 0.5) * PI / n as f64).collect()
}

/// Tanh–sinh rule on [0, 1]. Each node carries its complement 1 - x so
/// integrands singular at the right endpoint can be evaluated without
/// cancellation.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    pub nodes: Vec<f64>,
    pub complements: Vec<f64>,
    pub weights: Vec<f64>,
}

impl TanhSinh {
    /// Step `h`; nodes for |kh| ≤ 3.2, where the weights fall below 1e-16.
    pub fn new(h: f64) -> Self {
        let kmax = (3.2 / h).ceil() as i64;
        let mut nodes = Vec::with_capacity(2 * kmax as usize + 1);
        let mut complements = Vec::with_capacity(nodes.capacity());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let s = 0.5 * PI * t.sinh();
            let ch = s.cosh();
            // x = (1 + tanh s)/2 = 1/(1 + e^{-2s}), 1 - x = 1/(1 + e^{2s})
            let x = 1.0 / (1.0 + (-2.0 * s).exp());
            let c = 1.0 / (1.0 + (2.0 * s).exp());
            let w = 0.5 * h * 0.5 * PI * t.cosh() / (ch * ch);
            if w < 1e-300 || x <= 0.0 || c <= 0.0 {
                continue;
            }
            nodes.push(x);
            complements.push(c);
            weights.push(w);
        }
        TanhSinh {
            nodes,
            complements,
            weights,
        }
    }
}

/// Adaptive Gauss–Legendre on [a, b]: a panel is accepted when the 10-point
/// rule on it agrees with the sum over its two halves.
pub fn adaptive(a: f64, b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> Result<f64> {
    let rule = GaussLegendre::new(10);
    let whole = rule.integrate(a, b, &mut f);
    let mut total = 0.0;
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut panels = 0usize;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        panels += 1;
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &mut f);
        let right = rule.integrate(mid, hi, &mut f);
        let change = (left + right - est).abs();
        let local_tol = tol * ((hi - lo) / (b - a)).max(1e-3);
        if change <= local_tol || depth >= 40 {
            if depth >= 40 && change > local_tol {
                return Err(Error::Quadrature {
                    what: "adaptive Gauss-Legendre",
                    nodes: panels * 20,
                    change,
                });
            }
            total += left + right;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(8);
        // degree 15 is the limit for 8 nodes
        let v = rule.integrate(-1.0, 1.0, |x| x.powi(14) + x.powi(15));
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn half_range_integrates_even_functions() {
        let rule = GaussLegendre::half_range(6);
        let v: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(10))
            .sum();
        assert!((v - 1.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_rule_integrates_against_arcsine_weight() {
        let n = 16;
        let v: f64 = chebyshev_angles(n)
            .iter()
            .map(|t| t.cos().powi(4))
            .sum::<f64>()
            * PI
            / n as f64;
        assert!((v - 3.0 * PI / 8.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let rule = TanhSinh::new(1.0 / 16.0);
        // ∫_0^1 ln(1-x) dx = -1, singular at x = 1: use the complement
        let v: f64 = rule
            .complements
            .iter()
            .zip(&rule.weights)
            .map(|(c, w)| w * c.ln())
            .sum();
        assert!((v + 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn adaptive_integrates_peaked_function() {
        let v = adaptive(-1.0, 1.0, 1e-12, |x| 1.0 / (1e-4 + x * x)).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v - exact).abs() < 1e-9 * exact);
    }
}
