//! Leading (soliton-free, small-amplitude) edge of the oscillation zone.
//!
//! At the leading edge β₂ = β₃ = v and β₁ = u solve
//! Φ(v; u) + 6t = 0, ∂_vΦ(v; u) = 0, and the edge sits at x⁻ = 6tu + f₋(u).
//! The system is singular at breakup, where u - v ~ (t - t_c)^{1/2}, so the
//! trajectory is parametrised by σ = (t - t_c)^{1/4}, in which u, v and the
//! phase integrand are smooth.

use super::phi::phi_derivs;
use crate::error::{Error, Result};
use crate::initial_data::{breakup, BreakupPoint, InitialDataModel};
use crate::interp::{cubic_spline, Hermite};

/// Leading-edge data at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeState {
    pub t: f64,
    pub x_minus: f64,
    /// β₁ at the edge.
    pub u: f64,
    /// β₂ = β₃ at the edge.
    pub v: f64,
    pub u_t: f64,
    pub v_t: f64,
    /// Curvature c with x - x⁻ ≈ c δ² for the small-amplitude expansion.
    pub c: f64,
    /// φ₀(t) = -16 ∫_{t_c}^t (u - v)^{3/2} dτ.
    pub phi0: f64,
}

const EDGE_TOL: f64 = 1e-12;
const EDGE_ACCEPT: f64 = 1e-10;
/// t - t_c below which the breakup series replaces Newton.
const SERIES_ONLY: f64 = 1e-10;

/// Newton on (u, v) for the leading-edge system at time t.
fn edge_newton(model: &InitialDataModel, t: f64, mut u: f64, mut v: f64) -> Result<(f64, f64)> {
    let resid = |u: f64, v: f64| -> Result<([f64; 2], [[f64; 2]; 2])> {
        let d = phi_derivs(model, v, u)?;
        Ok(([d.value + 6.0 * t, d.dv], [[d.du, d.dv], [d.duv, d.dvv]]))
    };
    let (mut f, mut j) = resid(u, v)?;
    let mut norm = f[0].abs().max(f[1].abs());
    for _ in 0..60 {
        if norm < EDGE_TOL {
            break;
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let du = -(j[1][1] * f[0] - j[0][1] * f[1]) / det;
        let dv = -(-j[1][0] * f[0] + j[0][0] * f[1]) / det;
        let mut lambda = 1.0;
        let mut moved = false;
        while lambda > 1e-6 {
            let (un, vn) = (u + lambda * du, v + lambda * dv);
            if let Ok((fn_, jn)) = resid(un, vn) {
                let nn = fn_[0].abs().max(fn_[1].abs());
                if nn < norm {
                    (u, v, f, j, norm) = (un, vn, fn_, jn, nn);
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if norm < EDGE_ACCEPT && u > v {
        Ok((u, v))
    } else {
        Err(Error::NoConvergence {
            what: "leading-edge Newton",
            iterations: 60,
            residual: norm,
        })
    }
}

fn state_from(model: &InitialDataModel, t: f64, u: f64, v: f64, phi0: f64) -> Result<EdgeState> {
    let p = model.profile();
    let d = phi_derivs(model, v, u)?;
    Ok(EdgeState {
        t,
        x_minus: 6.0 * t * u + p.f_minus(u),
        u,
        v,
        u_t: 12.0 * (v - u) / (6.0 * t + p.f_minus_d1(u)),
        v_t: 6.0 / ((u - v) * d.dvv),
        c: -0.5 * (u - v) * d.dvv,
        phi0,
    })
}

/// The leading edge on [t_c, t_max], sampled on a uniform σ grid.
#[derive(Debug, Clone)]
pub struct EdgeTrajectory {
    model: InitialDataModel,
    breakup: BreakupPoint,
    sigma: Vec<f64>,
    u: Hermite,
    v: Hermite,
    /// Phase integrand -64σ³(u - v)^{3/2} and its running integral at the nodes.
    integrand: Hermite,
    phase: Vec<f64>,
}

impl EdgeTrajectory {
    /// Trace the edge from breakup to `t_max` with `n` σ steps.
    pub fn build(model: &InitialDataModel, t_max: f64, n: usize) -> Result<Self> {
        let b = breakup(model)?;
        if !(t_max > b.t_c) {
            return Err(Error::domain("leading edge time", t_max, "(t_c, ∞)"));
        }
        let n = n.max(8);
        let f3 = model.f_minus_ppp(b.u_c)?;
        let s_max = (t_max - b.t_c).powf(0.25);
        let sigma: Vec<f64> = (0..=n).map(|k| s_max * k as f64 / n as f64).collect();
        let (mut us, mut vs) = (vec![b.u_c], vec![b.u_c]);
        for k in 1..=n {
            let dt = sigma[k].powi(4);
            let t = if k == n { t_max } else { b.t_c + dt };
            // u - u_c ≈ a, v - u_c ≈ -a/4 with a² = -72(t - t_c)/f₋‴(u_c)
            let a = (-72.0 * dt / f3).sqrt();
            let series = (b.u_c + a, b.u_c - 0.25 * a);
            if dt < SERIES_ONLY {
                // below this t - t_c is lost against t_c in double precision
                us.push(series.0);
                vs.push(series.1);
                continue;
            }
            let (u0, v0) = if k < 3 || sigma[k - 3].powi(4) < SERIES_ONLY {
                series
            } else {
                // quadratic extrapolation in σ on the uniform grid
                (3.0 * us[k - 1] - 3.0 * us[k - 2] + us[k - 3], 3.0 * vs[k - 1] - 3.0 * vs[k - 2] + vs[k - 3])
            };
            let (u, v) = edge_newton(model, t, u0, v0)?;
            us.push(u);
            vs.push(v);
        }
        let g: Vec<f64> = (0..=n)
            .map(|k| -64.0 * sigma[k].powi(3) * (us[k] - vs[k]).max(0.0).powf(1.5))
            .collect();
        let integrand = cubic_spline(&sigma, &g)?;
        let mut phase = vec![0.0; n + 1];
        for k in 0..n {
            phase[k + 1] = phase[k] + simpson(&integrand, sigma[k], sigma[k + 1]);
        }
        Ok(EdgeTrajectory {
            model: model.clone(),
            breakup: b,
            u: cubic_spline(&sigma, &us)?,
            v: cubic_spline(&sigma, &vs)?,
            sigma,
            integrand,
            phase,
        })
    }

    pub fn breakup(&self) -> BreakupPoint {
        self.breakup
    }

    pub fn t_max(&self) -> f64 {
        self.breakup.t_c + self.sigma[self.sigma.len() - 1].powi(4)
    }

    /// φ₀ at time t from the spline of the integrand (exact per panel).
    pub fn phase(&self, t: f64) -> Result<f64> {
        let s = self.sigma_of(t)?;
        let h = self.sigma[1];
        let k = ((s / h).floor() as usize).min(self.sigma.len() - 2);
        Ok(self.phase[k] + simpson(&self.integrand, self.sigma[k], s))
    }

    fn sigma_of(&self, t: f64) -> Result<f64> {
        let tc = self.breakup.t_c;
        let tm = self.t_max();
        if !(t >= tc && t <= tm * (1.0 + 1e-14)) {
            return Err(Error::Domain {
                what: "leading-edge trajectory",
                value: t,
                domain: "[t_c, t_max]",
            });
        }
        Ok((t - tc).max(0.0).powf(0.25).min(self.sigma[self.sigma.len() - 1]))
    }

    /// Edge data at t ∈ (t_c, t_max], polished by Newton from the splines.
    pub fn state_at(&self, t: f64) -> Result<EdgeState> {
        let s = self.sigma_of(t)?;
        if s == 0.0 {
            return Err(Error::domain("leading edge", t, "(t_c, t_max]: degenerate at breakup"));
        }
        let (u, v) = edge_newton(&self.model, t, self.u.eval(s), self.v.eval(s))?;
        state_from(&self.model, t, u, v, self.phase(t)?)
    }

    /// States at the grid times (excluding breakup itself).
    pub fn states(&self) -> Result<Vec<EdgeState>> {
        let tc = self.breakup.t_c;
        (1..self.sigma.len())
            .map(|k| {
                let t = tc + self.sigma[k].powi(4);
                state_from(&self.model, t, self.u.values()[k], self.v.values()[k], self.phase[k])
            })
            .collect()
    }
}

/// ∫_a^b of the spline; Simpson is exact on each cubic piece.
fn simpson(s: &Hermite, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // split at nodes so every Simpson call sees a single cubic
    let nodes = s.nodes();
    let mut total = 0.0;
    let mut lo = a;
    for &x in nodes.iter().filter(|&&x| x > a && x < b) {
        total += (x - lo) / 6.0 * (s.eval(lo) + 4.0 * s.eval(0.5 * (lo + x)) + s.eval(x));
        lo = x;
    }
    total + (b - lo) / 6.0 * (s.eval(lo) + 4.0 * s.eval(0.5 * (lo + b)) + s.eval(b))
}

const TRAJECTORY_STEPS: usize = 1000;

/// Leading-edge state at time t > t_c.
pub fn solve_leading_edge(model: &InitialDataModel, t: f64) -> Result<EdgeState> {
    EdgeTrajectory::build(model, t, TRAJECTORY_STEPS)?.state_at(t)
}

/// Phase offset φ₀(t); zero at breakup.
pub fn phase_phi0(model: &InitialDataModel, t: f64) -> Result<f64> {
    let b = breakup(model)?;
    if t == b.t_c {
        return Ok(0.0);
    }
    Ok(solve_leading_edge(model, t)?.phi0)
}

/// Time at which the smallest invariant first reaches the minimum of u₀,
/// i.e. the trailing-edge foot X₃ crosses the hump. `None` if that does not
/// happen within the search horizon. Cached on the model.
pub fn hump_time(model: &InitialDataModel) -> Result<Option<f64>> {
    if let Some(t) = model.hump_time() {
        return Ok(t);
    }
    let t = super::zone::find_hump_time(model)?;
    Ok(model.hump_time_or_init(|| t))
}
