//! Chebyshev–Lobatto transforms and coefficient-space differentiation.

use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Lobatto points x_l = cos(πl/N), l = 0..=N (so x_0 = 1).
pub fn lobatto_points(n: usize) -> Vec<f64> {
    (0..=n).map(|l| (PI * l as f64 / n as f64).cos()).collect()
}

/// Dense DCT-I pair between values at the Lobatto points and Chebyshev
/// coefficients. N is small (≈128) so the O(N²) matrix form is adequate.
#[derive(Debug, Clone)]
pub struct ChebyshevTransform {
    n: usize,
    cos: Vec<f64>,
}

impl ChebyshevTransform {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least degree 2");
        let mut cos = vec![0.0; (n + 1) * (n + 1)];
        for k in 0..=n {
            for l in 0..=n {
                // reduce k·l mod 2N first to keep the angle small
                let m = (k * l) % (2 * n);
                cos[k * (n + 1) + l] = (PI * m as f64 / n as f64).cos();
            }
        }
        ChebyshevTransform { n, cos }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn values_to_coeffs(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n;
        let scale = 2.0 / n as f64;
        (0..=n)
            .map(|k| {
                let row = &self.cos[k * (n + 1)..(k + 1) * (n + 1)];
                let mut s = 0.5 * (row[0] * values[0] + row[n] * values[n]);
                for l in 1..n {
                    s += row[l] * values[l];
                }
                let c = scale * s;
                if k == 0 || k == n {
                    0.5 * c
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn coeffs_to_values(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..=n)
            .map(|l| (0..=n).map(|k| coeffs[k] * self.cos[k * (n + 1) + l]).sum())
            .collect()
    }
}

/// Matrix taking coefficients of p to coefficients of p′:
/// D[k, m] = 2m for k < m with m - k odd, row 0 halved.
pub fn derivative_matrix(n: usize) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(n + 1, n + 1);
    for m in 1..=n {
        let mut k = m as isize - 1;
        while k >= 0 {
            let v = 2.0 * m as f64;
            d[(k as usize, m)] = if k == 0 { 0.5 * v } else { v };
            k -= 2;
        }
    }
    d
}

/// Coefficients of the derivative by the backward recurrence
/// c′_{k-1} = c′_{k+1} + 2k c_k.
pub fn derivative_coeffs(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let mut d = vec![0.0; n + 1];
    if n == 0 {
        return d;
    }
    for k in (1..=n).rev() {
        let next = if k + 1 <= n { d[k + 1] } else { 0.0 };
        d[k - 1] = next + 2.0 * k as f64 * c[k];
    }
    d[0] *= 0.5;
    d
}

/// Σ c_k T_k(x) by Clenshaw recurrence.
pub fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}
