//! The Euler–Poisson–Darboux function q(β₁, β₂, β₃) and its gradient.
//!
//! Two equivalent quadratures are used:
//!
//! * the tensor form, after μ = 1 - 2ρ², ν = cos θ,
//!   q = (1/π) ∫₀¹∫₀^π f₋((1-ρ²)(β₁cos²½θ + β₂sin²½θ) + ρ²β₃) dθ dρ,
//!   valid while β₃ sits on the decreasing branch;
//! * the split form in the characteristic foot X₃ of β₃ (u₀(X₃) = β₃),
//!   q = (1/2π) ∫₀^π I(λ, X₃)/√(λ - β₃) dθ, λ = β₁cos²½θ + β₂sin²½θ,
//!   I(λ, X₃) = 2X₃√(λ - β₃) - 2∫_{f₋(λ)}^{X₃} √(λ - u₀(X)) dX,
//!   which stays smooth when X₃ crosses the minimum of u₀ and so also covers
//!   the regime after β₃ has passed over the hump.
//!
//! Both rules double their node count (64 → 512 per axis) until q and all
//! three partial derivatives settle.

use crate::error::{Error, Result};
use crate::initial_data::InitialDataModel;
use crate::quad::{chebyshev_angles, GaussLegendre};
use std::sync::OnceLock;

const LEVELS: [usize; 4] = [64, 128, 256, 512];
const SETTLE: f64 = 1e-11;

/// q together with ∂q/∂β_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QValues {
    pub q: f64,
    pub grad: [f64; 3],
}

impl QValues {
    fn distance(&self, other: &QValues) -> f64 {
        let mut d = (self.q - other.q).abs() / (1.0 + self.q.abs());
        for i in 0..3 {
            d = d.max((self.grad[i] - other.grad[i]).abs() / (1.0 + self.grad[i].abs()));
        }
        d
    }
}

struct Rule {
    /// Half-range Gauss–Legendre nodes/weights on [0, 1].
    rho: Vec<(f64, f64)>,
    /// cos²(θ/2), sin²(θ/2) at the midpoint angles.
    angles: Vec<(f64, f64)>,
}

fn rule(level: usize) -> &'static Rule {
    static RULES: [OnceLock<Rule>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let i = LEVELS.iter().position(|&n| n == level).expect("quadrature level");
    RULES[i].get_or_init(|| {
        let gl = GaussLegendre::half_range(level);
        Rule {
            rho: gl.nodes.into_iter().zip(gl.weights).collect(),
            angles: chebyshev_angles(level)
                .into_iter()
                .map(|t| {
                    let c = (0.5 * t).cos();
                    let s = (0.5 * t).sin();
                    (c * c, s * s)
                })
                .collect(),
        }
    })
}

fn settle(what: &'static str, mut eval: impl FnMut(&'static Rule) -> QValues) -> Result<QValues> {
    let mut prev = eval(rule(LEVELS[0]));
    let mut change = f64::INFINITY;
    for &n in &LEVELS[1..] {
        let next = eval(rule(n));
        change = next.distance(&prev);
        if change < SETTLE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        what,
        nodes: LEVELS[LEVELS.len() - 1],
        change,
    })
}

fn check_arg(b: f64) -> Result<()> {
    if !(b > -1.0 && b < 0.0) {
        return Err(Error::domain("q argument", b, "(-1, 0)"));
    }
    Ok(())
}

fn tensor(model: &InitialDataModel, b: [f64; 3], r: &Rule) -> QValues {
    let p = model.profile();
    let n = r.angles.len() as f64;
    let (mut q, mut g1, mut g2, mut g3) = (0.0, 0.0, 0.0, 0.0);
    for &(rho, w) in &r.rho {
        let r2 = rho * rho;
        let om = (1.0 - rho) * (1.0 + rho);
        let (mut sq, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
        for &(c2, s2a) in &r.angles {
            let a = om * (b[0] * c2 + b[1] * s2a) + r2 * b[2];
            let d = p.f_minus_d1(a);
            sq += p.f_minus(a);
            s1 += d * c2;
            s2 += d * s2a;
            s3 += d;
        }
        q += w * sq;
        g1 += w * om * s1;
        g2 += w * om * s2;
        g3 += w * r2 * s3;
    }
    QValues {
        q: q / n,
        grad: [g1 / n, g2 / n, g3 / n],
    }
}

fn split(model: &InitialDataModel, b1: f64, b2: f64, x3: f64, r: &Rule) -> QValues {
    let p = model.profile();
    let b3 = p.u0(x3);
    let n = r.angles.len() as f64;
    let (mut q, mut g1, mut g2, mut g3) = (0.0, 0.0, 0.0, 0.0);
    for &(c2, s2a) in &r.angles {
        let lam = b1 * c2 + b2 * s2a;
        let xl = p.f_minus(lam);
        let span = x3 - xl;
        // X = X_λ + span·s² removes the square-root edge at X_λ
        let (mut j1, mut jm) = (0.0, 0.0);
        for &(s, w) in &r.rho {
            // rho nodes are the positive half of a symmetric rule: map [0,1] → s
            let x = xl + span * s * s;
            let g = (lam - p.u0(x)).max(0.0);
            let jac = 2.0 * span * s;
            let sg = g.sqrt();
            j1 += w * jac * sg;
            if sg > 0.0 {
                jm += w * jac / sg;
            }
        }
        let d = lam - b3;
        let sd = d.sqrt();
        let i = 2.0 * x3 * sd - 2.0 * j1;
        let h = i / sd;
        let il = x3 / sd - jm;
        let hp = il / sd - 0.5 * i / (d * sd);
        let h3 = -x3 / d + 0.5 * i / (d * sd);
        q += h;
        g1 += hp * c2;
        g2 += hp * s2a;
        g3 += h3;
    }
    let w = 1.0 / (2.0 * n);
    QValues {
        q: w * q,
        grad: [w * g1, w * g2, w * g3],
    }
}

/// q(β₁, β₂, β₃) with its gradient by the tensor rule. Arguments may come
/// in any order (q is symmetric) but must lie in (-1, 0).
pub fn q_partials(model: &InitialDataModel, b: [f64; 3]) -> Result<QValues> {
    for &x in &b {
        check_arg(x)?;
    }
    settle("q (tensor rule)", |r| tensor(model, b, r))
}

/// q(β₁, β₂, β₃) by the tensor rule.
pub fn q_epd(model: &InitialDataModel, b1: f64, b2: f64, b3: f64) -> Result<f64> {
    Ok(q_partials(model, [b1, b2, b3])?.q)
}

/// q and its gradient (∂/∂β₁, ∂/∂β₂, ∂/∂β₃) in the split form, with β₃ given
/// through its characteristic foot `x3` (β₃ = u₀(x3), either side of the hump).
/// Requires β₁ ≥ β₂ > β₃.
pub fn q_split(model: &InitialDataModel, b1: f64, b2: f64, x3: f64) -> Result<QValues> {
    check_arg(b1)?;
    check_arg(b2)?;
    let b3 = model.u0(x3);
    if !(b2 > b3) || !(b1 >= b2) {
        return Err(Error::Inadmissible {
            what: "q split form",
            detail: format!("needs β₁ ≥ β₂ > β₃, got ({b1}, {b2}, {b3})"),
        });
    }
    settle("q (split form)", |r| split(model, b1, b2, x3, r))
}

/// Dispatch used by the hodograph solver: the tensor rule while β₃ is on the
/// decreasing branch and away from the minimum, the split form otherwise.
pub fn q_for_foot(model: &InitialDataModel, b1: f64, b2: f64, x3: f64) -> Result<QValues> {
    let b3 = model.u0(x3);
    if x3 <= 0.0 && b3 > -1.0 + HUMP_GUARD {
        q_partials(model, [b1, b2, b3])
    } else {
        q_split(model, b1, b2, x3)
    }
}

/// Below 1 + β₃ = HUMP_GUARD the f₋′ kernel of the tensor rule is too close
/// to its square-root singularity at -1 and the split form takes over.
pub const HUMP_GUARD: f64 = 0.05;
