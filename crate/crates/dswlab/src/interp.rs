//! One-dimensional cubic interpolants on sorted, possibly non-uniform nodes.

use crate::error::{Error, Result};

fn check_nodes(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Config(format!(
            "interpolation needs ≥ 3 matching nodes (got {} x, {} y)",
            xs.len(),
            ys.len()
        )));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("interpolation nodes must be strictly increasing".into()));
    }
    Ok(())
}

fn locate(xs: &[f64], x: f64) -> usize {
    match xs.binary_search_by(|p| p.partial_cmp(&x).unwrap_or(std::cmp::Ordering::Less)) {
        Ok(i) => i.min(xs.len() - 2),
        Err(i) => i.saturating_sub(1).min(xs.len() - 2),
    }
}

/// Cubic Hermite interpolant from nodal values and slopes.
#[derive(Debug, Clone)]
pub struct Hermite {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Hermite {
    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    /// Value and first derivative; x outside the nodes extrapolates the end cubic.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1, d0, d1) = (self.ys[i], self.ys[i + 1], self.ds[i] * h, self.ds[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        let dv = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * d1)
            / h;
        (v, dv)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).1
    }

    /// Second and third derivatives of the local cubic. The third is
    /// constant on each cell.
    pub fn higher_derivatives(&self, x: f64) -> (f64, f64) {
        let i = locate(&self.xs, x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1, d0, d1) = (self.ys[i], self.ys[i + 1], self.ds[i] * h, self.ds[i + 1] * h);
        let d2 = ((12.0 * t - 6.0) * y0 + (6.0 * t - 4.0) * d0 + (6.0 - 12.0 * t) * y1 + (6.0 * t - 2.0) * d1) / (h * h);
        let d3 = (12.0 * y0 + 6.0 * d0 - 12.0 * y1 + 6.0 * d1) / (h * h * h);
        (d2, d3)
    }
}

/// Monotonicity-preserving cubic (Fritsch–Carlson slopes). Used for
/// user-supplied profiles where overshoot would create spurious extrema.
pub fn monotone_cubic(xs: &[f64], ys: &[f64]) -> Result<Hermite> {
    check_nodes(xs, ys)?;
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    let mut ds = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    ds[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    ds[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    Ok(Hermite {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        ds,
    })
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// C² cubic spline with end slopes from the cubic through the four end
/// nodes. For smooth data the error is fourth order up to the ends.
pub fn cubic_spline(xs: &[f64], ys: &[f64]) -> Result<Hermite> {
    check_nodes(xs, ys)?;
    let n = xs.len();
    if n < 4 {
        return monotone_cubic(xs, ys);
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    let d_first = lagrange_end_slope(&xs[..4], &ys[..4]).0;
    let d_last = lagrange_end_slope(&xs[n - 4..], &ys[n - 4..]).1;

    // slope continuity of the second derivative: tridiagonal system for d_1..d_{n-2}
    let m = n - 2;
    let mut ds = vec![0.0; n];
    ds[0] = d_first;
    ds[n - 1] = d_last;
    if m > 0 {
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for k in 0..m {
            let i = k + 1;
            sub[k] = h[i];
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            sup[k] = h[i - 1];
            rhs[k] = 3.0 * (h[i] * delta[i - 1] + h[i - 1] * delta[i]);
        }
        rhs[0] -= sub[0] * d_first;
        rhs[m - 1] -= sup[m - 1] * d_last;
        for k in 1..m {
            let w = sub[k] / diag[k - 1];
            diag[k] -= w * sup[k - 1];
            rhs[k] -= w * rhs[k - 1];
        }
        ds[m] = rhs[m - 1] / diag[m - 1];
        for k in (0..m - 1).rev() {
            ds[k + 1] = (rhs[k] - sup[k] * ds[k + 2]) / diag[k];
        }
    }
    Ok(Hermite {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        ds,
    })
}

/// Derivatives at the first and last of four nodes of their interpolating cubic.
fn lagrange_end_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let slope_at = |at: usize| {
        let mut d = 0.0;
        for j in 0..4 {
            let denom: f64 = (0..4).filter(|&k| k != j).map(|k| x[j] - x[k]).product();
            let numer: f64 = if j == at {
                (0..4).filter(|&k| k != j).map(|k| 1.0 / (x[at] - x[k])).sum::<f64>() * denom
            } else {
                (0..4).filter(|&k| k != j && k != at).map(|k| x[at] - x[k]).product()
            };
            d += y[j] * numer / denom;
        }
        d
    };
    (slope_at(0), slope_at(3))
}
