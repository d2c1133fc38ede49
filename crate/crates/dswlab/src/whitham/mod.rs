//! Whitham modulation machinery for the one-phase zone: Riemann invariants
//! β₁ > β₂ > β₃, their speeds, the hodograph solve, the leading-edge
//! system and the zone continuation.
//!
//! Every division by a small elliptic quantity is rewritten through
//! D = 1 - E/K, which the AGM delivers without cancellation:
//! β₁ + α = (β₁-β₃)(1-D), β₂ + α = (β₁-β₃)(s²-D), β₃ + α = -(β₁-β₃)D.

mod edge;
mod phi;
mod q;
mod zone;

pub use edge::{hump_time, phase_phi0, solve_leading_edge, EdgeState, EdgeTrajectory};
pub use phi::{phi, phi_derivs, PhiDerivs};
pub use q::{q_epd, q_for_foot, q_partials, q_split, QValues, HUMP_GUARD};
pub use zone::{trailing_edge, trailing_edge_path, WhithamZone, ZoneNode, TRAILING_S2C};

use crate::error::{Error, Result};
use crate::initial_data::InitialDataModel;
use crate::specfun::{CompleteIntegrals, EllipticModulus};
use nalgebra::{Matrix3, Vector3};

/// Ordered Riemann invariants. β₃ is carried together with its
/// characteristic foot X₃ (u₀(X₃) = β₃); X₃ > 0 means β₃ has passed over
/// the minimum of u₀ and lives on the increasing branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhithamTriple {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub foot3: f64,
    s2: f64,
    s2c: f64,
}

/// Elliptic parameters that belong to a triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticData {
    pub s2: f64,
    /// 1 - s² = (β₁-β₂)/(β₁-β₃).
    pub s2c: f64,
    pub integrals: CompleteIntegrals,
    pub alpha: f64,
    pub nome: f64,
}

impl WhithamTriple {
    /// β₃ on the decreasing branch (foot f₋(β₃)). β₂ = β₃ is accepted as the
    /// leading-edge degeneration.
    pub fn new(model: &InitialDataModel, beta1: f64, beta2: f64, beta3: f64) -> Result<Self> {
        let foot3 = model.f_minus(beta3)?;
        Self::with_foot(model, beta1, beta2, foot3)
    }

    /// β₃ = u₀(foot3) on either side of the hump.
    pub fn with_foot(model: &InitialDataModel, beta1: f64, beta2: f64, foot3: f64) -> Result<Self> {
        let beta3 = model.u0(foot3);
        let span = beta1 - beta3;
        Self::checked(beta1, beta2, beta3, foot3, (beta2 - beta3) / span, (beta1 - beta2) / span)
    }

    /// Parametrised by the modulus: β₂ = β₃ + s²(β₁ - β₃), with the
    /// complement 1 - s² supplied exactly.
    pub fn from_modulus(model: &InitialDataModel, beta1: f64, foot3: f64, s2: f64, s2c: f64) -> Result<Self> {
        let beta3 = model.u0(foot3);
        let beta2 = beta3 + s2 * (beta1 - beta3);
        Self::checked(beta1, beta2, beta3, foot3, s2, s2c)
    }

    fn checked(beta1: f64, beta2: f64, beta3: f64, foot3: f64, s2: f64, s2c: f64) -> Result<Self> {
        let ordered = beta1 > beta2 && beta2 >= beta3 && beta3 >= -1.0 && beta1 < 0.0;
        if !ordered || !(s2 >= 0.0 && s2c > 0.0) {
            return Err(Error::Inadmissible {
                what: "Whitham triple",
                detail: format!("needs 0 > β₁ > β₂ ≥ β₃ ≥ -1, got ({beta1}, {beta2}, {beta3})"),
            });
        }
        Ok(WhithamTriple {
            beta1,
            beta2,
            beta3,
            foot3,
            s2,
            s2c,
        })
    }

    pub fn betas(&self) -> [f64; 3] {
        [self.beta1, self.beta2, self.beta3]
    }

    pub fn sum(&self) -> f64 {
        self.beta1 + self.beta2 + self.beta3
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn s2_complement(&self) -> f64 {
        self.s2c
    }

    /// True once β₃ has crossed the minimum of u₀.
    pub fn past_hump(&self) -> bool {
        self.foot3 > 0.0
    }

    pub fn elliptic(&self) -> Result<EllipticData> {
        let m = EllipticModulus::from_squares(self.s2, self.s2c)?;
        let integrals = m.integrals();
        let span = self.beta1 - self.beta3;
        Ok(EllipticData {
            s2: self.s2,
            s2c: self.s2c,
            integrals,
            alpha: -self.beta3 - span * integrals.one_minus_e_over_k,
            nome: integrals.nome(),
        })
    }

    /// α = -β₁ + (β₁-β₃)E/K.
    pub fn alpha(&self) -> Result<f64> {
        Ok(self.elliptic()?.alpha)
    }
}

/// Ratios s²/D and s²/(s² - D); for s² below 1e-12 the series
/// D = s²/2 + s⁴/16 + … replaces the quotient of two vanishing numbers.
fn modulus_ratios(s2: f64, d: f64) -> (f64, f64) {
    if s2 < 1e-12 {
        (2.0 - 0.25 * s2, 2.0 + 0.25 * s2)
    } else {
        (s2 / d, s2 / (s2 - d))
    }
}

/// Reduced speeds P_i = v_i - 2Σβ in cancellation-free form.
fn reduced_speeds(t: &WhithamTriple, ell: &EllipticData) -> [f64; 3] {
    let d = ell.integrals.one_minus_e_over_k;
    let (over_d, over_sd) = modulus_ratios(ell.s2, d);
    let gap12 = ell.s2c * (t.beta1 - t.beta3);
    [
        4.0 * gap12 / (1.0 - d),
        -4.0 * gap12 * over_sd,
        -4.0 * (t.beta1 - t.beta3) * over_d,
    ]
}

/// Characteristic speeds v_i = 4Π_{k≠i}(β_i-β_k)/(β_i+α) + 2Σβ.
pub fn whitham_speeds(triple: &WhithamTriple) -> Result<[f64; 3]> {
    let ell = triple.elliptic()?;
    let p = reduced_speeds(triple, &ell);
    let s = 2.0 * triple.sum();
    Ok([p[0] + s, p[1] + s, p[2] + s])
}

/// w_i = ½(v_i - 2Σβ)∂q/∂β_i + q.
pub fn hodograph_w(triple: &WhithamTriple, q: &QValues) -> Result<[f64; 3]> {
    let ell = triple.elliptic()?;
    let p = reduced_speeds(triple, &ell);
    Ok([0, 1, 2].map(|i| 0.5 * p[i] * q.grad[i] + q.q))
}

/// q and its gradient at a triple, dispatched on the branch of β₃.
pub fn q_at(model: &InitialDataModel, triple: &WhithamTriple) -> Result<QValues> {
    q_for_foot(model, triple.beta1, triple.beta2, triple.foot3)
}

/// The nondegenerate residuals used for Newton:
/// (v₁t + w₁ - x)(α + β₁), v₂t + w₂ - x, ((v₂ - v₃)t + w₂ - w₃)/(β₂ - β₃),
/// each written so that no factor degenerates at either edge. For s² > ½ the
/// first is replaced by ((v₁ - v₂)t + w₁ - w₂)/(β₁ - β₂).
pub fn hodograph_residuals(model: &InitialDataModel, triple: &WhithamTriple, x: f64, t: f64) -> Result<[f64; 3]> {
    if triple.s2 == 0.0 {
        return Err(Error::Inadmissible {
            what: "hodograph residuals",
            detail: "degenerate at β₂ = β₃; the leading-edge system applies there".into(),
        });
    }
    let ell = triple.elliptic()?;
    let qv = q_at(model, triple)?;
    Ok(residuals_with(triple, &ell, &qv, x, t))
}

fn residuals_with(tr: &WhithamTriple, ell: &EllipticData, qv: &QValues, x: f64, t: f64) -> [f64; 3] {
    let d = ell.integrals.one_minus_e_over_k;
    let (over_d, over_sd) = modulus_ratios(ell.s2, d);
    let span = tr.beta1 - tr.beta3;
    let big_x = x - 2.0 * t * tr.sum() - qv.q;
    let a = [2.0 * t + qv.grad[0], 2.0 * t + qv.grad[1], 2.0 * t + qv.grad[2]];
    let gap12 = ell.s2c * span;
    // R3 = (2/s²)[(2t+q₃)s²/D - (1-s²)(2t+q₂)s²/(s²-D)]
    let r3 = 2.0 * (a[2] * over_d - ell.s2c * a[1] * over_sd) / ell.s2;
    // On the trailing side the first equation degenerates into a multiple of
    // the second (both reduce to X = 0 as β₂ → β₁); its divided difference
    // with the second, ((v₁-v₂)t + w₁ - w₂)/(β₁-β₂), takes over there.
    let r1 = if ell.s2 > 0.5 {
        -2.0 * (a[0] / (1.0 - d) + a[1] * over_sd)
    } else {
        -(1.0 - d) * span * big_x + 2.0 * gap12 * span * a[0]
    };
    [r1, -big_x - 2.0 * gap12 * over_sd * a[1], r3]
}

/// Outcome of a hodograph Newton solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HodographSolveResult {
    pub triple: WhithamTriple,
    pub residual_norm: f64,
    pub newton_iters: usize,
}

/// Unknowns of the Newton iteration. Both parametrise β₂ through
/// p = -ln(1 - s²), which stays well conditioned at both edges.
#[derive(Debug, Clone, Copy)]
enum Unknowns {
    /// (β₁, X₃, p) at fixed x.
    AtX { x: f64 },
    /// (β₁, X₃, x) at fixed p.
    AtModulus { p: f64 },
}

/// s² and 1 - s² from p = -ln(1 - s²).
fn modulus_from_p(p: f64) -> (f64, f64) {
    (-(-p).exp_m1(), (-p).exp())
}

fn assemble(model: &InitialDataModel, mode: Unknowns, y: &Vector3<f64>) -> Result<(WhithamTriple, f64)> {
    let (p, x) = match mode {
        Unknowns::AtX { x } => (y[2], x),
        Unknowns::AtModulus { p } => (p, y[2]),
    };
    if !(p > 0.0) {
        return Err(Error::Inadmissible {
            what: "hodograph Newton",
            detail: format!("modulus parameter left (0, ∞): {p}"),
        });
    }
    let (s2, s2c) = modulus_from_p(p);
    Ok((WhithamTriple::from_modulus(model, y[0], y[1], s2, s2c)?, x))
}

fn eval(model: &InitialDataModel, mode: Unknowns, y: &Vector3<f64>, t: f64) -> Result<(WhithamTriple, Vector3<f64>)> {
    let (tr, x) = assemble(model, mode, y)?;
    let r = hodograph_residuals(model, &tr, x, t)?;
    Ok((tr, Vector3::new(r[0], r[1], r[2])))
}

const NEWTON_TOL: f64 = 1e-11;
const MAX_NEWTON: usize = 40;

/// Damped Newton with a forward-difference Jacobian.
fn newton(model: &InitialDataModel, mode: Unknowns, y0: Vector3<f64>, t: f64) -> Result<(HodographSolveResult, Vector3<f64>)> {
    let mut y = y0;
    let (mut tr, mut r) = eval(model, mode, &y, t)?;
    let mut norm = r.amax();
    for it in 0..MAX_NEWTON {
        if norm < NEWTON_TOL {
            return Ok((
                HodographSolveResult {
                    triple: tr,
                    residual_norm: norm,
                    newton_iters: it,
                },
                y,
            ));
        }
        let mut jac = Matrix3::zeros();
        for j in 0..3 {
            let h = 1e-7 * y[j].abs().max(0.1);
            let mut yp = y;
            yp[j] += h;
            let (_, rp) = eval(model, mode, &yp, t)?;
            jac.set_column(j, &((rp - r) / h));
        }
        let step = jac.lu().solve(&(-r)).ok_or(Error::Divergence {
            what: "hodograph Newton (singular Jacobian)",
            iterations: it,
            norm,
        })?;
        let mut lambda = 1.0;
        loop {
            let trial = y + step * lambda;
            match eval(model, mode, &trial, t) {
                Ok((ttr, tres)) if tres.amax() < norm * (1.0 - 1e-4 * lambda) || tres.amax() < NEWTON_TOL => {
                    y = trial;
                    tr = ttr;
                    r = tres;
                    norm = r.amax();
                    break;
                }
                _ => {
                    lambda *= 0.5;
                    if lambda < 1e-4 {
                        if norm < 1e-9 {
                            // converged as far as the quadrature noise allows
                            return Ok((
                                HodographSolveResult {
                                    triple: tr,
                                    residual_norm: norm,
                                    newton_iters: it,
                                },
                                y,
                            ));
                        }
                        return Err(Error::Divergence {
                            what: "hodograph Newton (line search)",
                            iterations: it,
                            norm,
                        });
                    }
                }
            }
        }
    }
    if norm < 1e-9 {
        return Ok((
            HodographSolveResult {
                triple: tr,
                residual_norm: norm,
                newton_iters: MAX_NEWTON,
            },
            y,
        ));
    }
    Err(Error::NoConvergence {
        what: "hodograph Newton",
        iterations: MAX_NEWTON,
        residual: norm,
    })
}

/// Solve the hodograph system at (x, t) by Newton on the nondegenerate
/// residuals, starting from `seed`.
pub fn solve_whitham(model: &InitialDataModel, x: f64, t: f64, seed: &WhithamTriple) -> Result<HodographSolveResult> {
    let y0 = Vector3::new(seed.beta1, seed.foot3, -seed.s2c.ln());
    Ok(newton(model, Unknowns::AtX { x }, y0, t)?.0)
}

/// Solve at fixed p = -ln(1 - s²) for (β₁, X₃, x).
fn solve_at_modulus(model: &InitialDataModel, p: f64, t: f64, seed: Vector3<f64>) -> Result<(HodographSolveResult, f64)> {
    let (res, y) = newton(model, Unknowns::AtModulus { p }, seed, t)?;
    Ok((res, y[2]))
}

/// x - v_i t - w_i for i = 1, 2, 3, straight from the speed and w formulas
/// (no rescaling). Meant as an independent check away from the edges.
pub fn hodograph_defect(model: &InitialDataModel, triple: &WhithamTriple, x: f64, t: f64) -> Result<[f64; 3]> {
    let v = whitham_speeds(triple)?;
    let w = hodograph_w(triple, &q_at(model, triple)?)?;
    Ok([x - v[0] * t - w[0], x - v[1] * t - w[1], x - v[2] * t - w[2]])
}
