//! Error measurement against the KdV reference, power-law fits, and the
//! detection of the zone around the leading edge where the multiscale
//! solution beats the elliptic/Hopf description.

use crate::asymptotics::{Asymptotics, MultiscaleOrder};
use crate::error::{Error, Result};
use crate::kdv::GridFunction;
use crate::whitham::EdgeState;
use std::f64::consts::PI;

/// Envelope rule used by [`better_zone`]; written to output metadata.
pub const ZONE_RULE: &str = "moving-window maxima over one local wavelength, first sign change scanning out from x-";

/// Least-squares fit of log₁₀Δ = a·log₁₀ε - b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub a: f64,
    pub b: f64,
    /// Correlation coefficient of (log ε, log Δ).
    pub r: f64,
    /// Standard error of the slope.
    pub sigma_a: f64,
}

pub fn loglog_fit(epsilons: &[f64], deltas: &[f64]) -> Result<ScalingFit> {
    let n = epsilons.len();
    if n < 3 || deltas.len() != n {
        return Err(Error::Config(format!("need ≥ 3 paired samples, got {n} and {}", deltas.len())));
    }
    if epsilons.iter().chain(deltas).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Config("log-log fit needs positive finite samples".into()));
    }
    let x: Vec<f64> = epsilons.iter().map(|e| e.log10()).collect();
    let y: Vec<f64> = deltas.iter().map(|d| d.log10()).collect();
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 1e-300 {
        return Err(Error::Config("degenerate abscissae in log-log fit".into()));
    }
    let a = sxy / sxx;
    let intercept = my - a * mx;
    let ssr: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - intercept - a * xi).powi(2)).sum();
    let r = if syy == 0.0 { 1.0 } else { (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0) };
    Ok(ScalingFit {
        a,
        b: -intercept,
        r,
        sigma_a: (ssr / (nf - 2.0) / sxx).sqrt(),
    })
}

/// u_num - u_asym at the grid points of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorProfile {
    pub x: Vec<f64>,
    pub error: Vec<f64>,
}

impl ErrorProfile {
    pub fn max_abs(&self) -> f64 {
        self.error.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Grid indices with x in [lo, hi].
fn window_indices(u: &GridFunction, lo: f64, hi: f64) -> Result<std::ops::RangeInclusive<usize>> {
    let g = &u.grid;
    let (a, b) = (g.x(0), g.x(g.n() - 1));
    if !(lo <= hi) || lo < a || hi > b {
        return Err(Error::Domain {
            what: "comparison window",
            value: if lo < a { lo } else { hi },
            domain: "inside the grid",
        });
    }
    let i0 = ((lo - a) / g.dx()).ceil() as usize;
    let i1 = (((hi - a) / g.dx()).floor() as usize).min(g.n() - 1);
    if i0 > i1 {
        return Err(Error::domain("comparison window", lo, "contains no grid point"));
    }
    Ok(i0..=i1)
}

/// Evaluator sampled on the grid points of [lo, hi] and subtracted from u.
pub fn pointwise_error(u: &GridFunction, mut eval: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<ErrorProfile> {
    let mut p = ErrorProfile {
        x: Vec::new(),
        error: Vec::new(),
    };
    for j in window_indices(u, lo, hi)? {
        let x = u.grid.x(j);
        p.x.push(x);
        p.error.push(u.values[j] - eval(x)?);
    }
    Ok(p)
}

/// Window |x - x⁻| ≤ w around the leading edge, with w given in units of the
/// Painlevé variable z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWindow {
    pub z_half_width: f64,
}

impl Default for EdgeWindow {
    fn default() -> Self {
        EdgeWindow { z_half_width: 0.5 }
    }
}

impl EdgeWindow {
    /// Half-width in x: z_half_width·ε^{2/3}(6(u-v)/|v_t|)^{1/3}.
    pub fn half_width(&self, edge: &EdgeState, epsilon: f64) -> f64 {
        self.z_half_width * epsilon.powf(2.0 / 3.0) * (6.0 * (edge.u - edge.v) / edge.v_t.abs()).cbrt()
    }

    pub fn bounds(&self, edge: &EdgeState, epsilon: f64) -> (f64, f64) {
        let w = self.half_width(edge, epsilon);
        (edge.x_minus - w, edge.x_minus + w)
    }
}

/// Δ_max: the largest |u - u_asym| in the edge window.
pub fn max_error_near_edge(u: &GridFunction, eval: impl FnMut(f64) -> Result<f64>, edge: &EdgeState, window: EdgeWindow) -> Result<f64> {
    let (lo, hi) = window.bounds(edge, u.epsilon);
    Ok(pointwise_error(u, eval, lo, hi)?.max_abs())
}

/// Middle third of the Whitham interval, where the elliptic description is
/// uniformly valid.
pub fn interior_window(x_minus: f64, x_plus: f64) -> (f64, f64) {
    let w = x_plus - x_minus;
    (x_minus + w / 3.0, x_minus + 2.0 * w / 3.0)
}

/// Region around the leading edge where the multiscale solution is the
/// better description. A side that finds no crossing within the scan range
/// is open and its bound is the end of the scan range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneBounds {
    pub left: f64,
    pub right: f64,
    pub t: f64,
    pub epsilon: f64,
    pub left_closed: bool,
    pub right_closed: bool,
}

impl ZoneBounds {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn closed(&self) -> bool {
        self.left_closed && self.right_closed
    }
}

/// Centered moving maximum of |e| over an odd window of n points,
/// truncated at the ends.
pub fn moving_max(e: &[f64], n: usize) -> Vec<f64> {
    let h = n / 2;
    (0..e.len())
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h).min(e.len() - 1);
            e[lo..=hi].iter().fold(0.0f64, |m, v| m.max(v.abs()))
        })
        .collect()
}

/// Scan the envelope difference D = env|u - u_ell| - env|u - u_ms| outward
/// from x⁻ on both sides; each bound is the last point before D ≤ 0. If
/// D ≤ 0 at x⁻ already, both sides are reported open.
///
/// `ms` and `ell` are evaluated on every grid point within
/// 10ε^{2/3} (plus one wavelength) of x⁻.
pub fn better_zone(
    u: &GridFunction,
    mut ms: impl FnMut(f64) -> Result<f64>,
    mut ell: impl FnMut(f64) -> Result<f64>,
    edge: &EdgeState,
) -> Result<ZoneBounds> {
    let eps = u.epsilon;
    let dx = u.grid.dx();
    let wavelength = PI * eps / (edge.u - edge.v).sqrt();
    let n = ((wavelength / dx).round() as usize).max(1) | 1;
    let range = 10.0 * eps.powf(2.0 / 3.0);
    let idx = window_indices(u, edge.x_minus - range - wavelength, edge.x_minus + range + wavelength)?;
    let first = *idx.start();
    let (mut e_ms, mut e_ell) = (Vec::new(), Vec::new());
    for j in idx {
        let x = u.grid.x(j);
        e_ms.push(u.values[j] - ms(x)?);
        e_ell.push(u.values[j] - ell(x)?);
    }
    let (env_ms, env_ell) = (moving_max(&e_ms, n), moving_max(&e_ell, n));
    let d: Vec<f64> = env_ell.iter().zip(&env_ms).map(|(a, b)| a - b).collect();
    let x_at = |k: usize| u.grid.x(first + k);
    let k0 = u.grid.nearest(edge.x_minus) - first;
    // multiscale not better at the edge itself: nothing to scan
    let degenerate = d[k0] <= 0.0;

    let mut left = (edge.x_minus - range, false);
    for k in (0..=k0).rev().filter(|_| !degenerate) {
        if x_at(k) < edge.x_minus - range {
            break;
        }
        if d[k] <= 0.0 {
            left = (x_at((k + 1).min(d.len() - 1)), true);
            break;
        }
    }
    let mut right = (edge.x_minus + range, false);
    for k in (k0..d.len()).filter(|_| !degenerate) {
        if x_at(k) > edge.x_minus + range {
            break;
        }
        if d[k] <= 0.0 {
            right = (x_at(k.saturating_sub(1)), true);
            break;
        }
    }
    Ok(ZoneBounds {
        left: left.0,
        right: right.0,
        t: u.time,
        epsilon: eps,
        left_closed: left.1,
        right_closed: right.1,
    })
}

/// All edge-region error measures for one KdV snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeComparison {
    pub epsilon: f64,
    /// Δ_max of the multiscale solution (order ε^{1/3}) in the edge window.
    pub multiscale_edge: f64,
    /// Max error of the elliptic/Hopf solution in the edge window.
    pub elliptic_edge: f64,
    /// Max error of the elliptic solution in the interior window.
    pub elliptic_interior: f64,
    pub zone: ZoneBounds,
    /// Max error of the composite solution in the edge window.
    pub composite_edge: f64,
}

/// Run every comparison for one snapshot. The elliptic/Hopf solution is
/// evaluated once per grid point and reused.
pub fn compare_snapshot(u: &GridFunction, asym: &Asymptotics, window: EdgeWindow) -> Result<EdgeComparison> {
    let eps = u.epsilon;
    if (u.time - asym.t()).abs() > 1e-12 {
        return Err(Error::Config(format!("snapshot at t = {} but asymptotics at t = {}", u.time, asym.t())));
    }
    let edge = *asym.edge();
    let zone = asym.zone();
    let mut cache = std::collections::HashMap::new();
    let g = u.grid;
    let mut ell = |x: f64| -> Result<f64> {
        let j = g.nearest(x);
        if let Some(&v) = cache.get(&j) {
            return Ok(v);
        }
        let v = asym.elliptic_hopf(g.x(j), eps)?;
        cache.insert(j, v);
        Ok(v)
    };
    let ms = |x: f64| Ok(asym.multiscale(x, eps, MultiscaleOrder::OneThird));

    let multiscale_edge = max_error_near_edge(u, ms, &edge, window)?;
    let elliptic_edge = max_error_near_edge(u, &mut ell, &edge, window)?;
    let (lo, hi) = interior_window(zone.x_minus(), zone.x_plus());
    let elliptic_interior = pointwise_error(u, &mut ell, lo, hi)?.max_abs();
    let bounds = better_zone(u, ms, &mut ell, &edge)?;
    let composite_edge = max_error_near_edge(
        u,
        |x| {
            if x < bounds.left || x > bounds.right {
                ell(x)
            } else {
                ms(x)
            }
        },
        &edge,
        window,
    )?;
    Ok(EdgeComparison {
        epsilon: eps,
        multiscale_edge,
        elliptic_edge,
        elliptic_interior,
        zone: bounds,
        composite_edge,
    })
}
