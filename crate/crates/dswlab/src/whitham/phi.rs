//! Φ(v; u) = (1/(2√(v-u))) ∫_u^v f₋′(μ)/√(v-μ) dμ and its derivatives.
//!
//! With μ = v + r²(u - v) the weight disappears:
//! Φ = ∫₀¹ f₋′(v + r²(u-v)) dr, and every derivative is a moment of f₋″ or
//! f₋‴ against a polynomial in r². Near the leading edge at late times u is
//! close to 0 where f₋′ has a pole, so the integrals use tanh–sinh nodes,
//! which cluster at r = 1, with the step halved until the values settle.

use crate::error::{Error, Result};
use crate::initial_data::InitialDataModel;
use crate::quad::TanhSinh;
use std::sync::OnceLock;

/// Φ with the partial derivatives used by the leading-edge system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiDerivs {
    pub value: f64,
    /// ∂_vΦ = ∫(1-r²) f₋″.
    pub dv: f64,
    /// ∂²_vΦ = ∫(1-r²)² f₋‴.
    pub dvv: f64,
    /// ∂_uΦ = ∫r² f₋″.
    pub du: f64,
    /// ∂_u∂_vΦ = ∫r²(1-r²) f₋‴.
    pub duv: f64,
}

const STEPS: [f64; 5] = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0];

fn rule(i: usize) -> &'static TanhSinh {
    static RULES: [OnceLock<TanhSinh>; 5] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    RULES[i].get_or_init(|| TanhSinh::new(STEPS[i]))
}

fn moments(model: &InitialDataModel, v: f64, u: f64, ts: &TanhSinh) -> PhiDerivs {
    let p = model.profile();
    let gap = u - v;
    let mut out = PhiDerivs {
        value: 0.0,
        dv: 0.0,
        dvv: 0.0,
        du: 0.0,
        duv: 0.0,
    };
    for ((&r, &c), &w) in ts.nodes.iter().zip(&ts.complements).zip(&ts.weights) {
        // 1 - r² from the stored complement keeps μ accurate next to u
        let om = c * (1.0 + r);
        let r2 = r * r;
        let mu = u - om * gap;
        let (d1, d2, d3) = (p.f_minus_d1(mu), p.f_minus_d2(mu), p.f_minus_d3(mu));
        out.value += w * d1;
        out.dv += w * om * d2;
        out.dvv += w * om * om * d3;
        out.du += w * r2 * d2;
        out.duv += w * r2 * om * d3;
    }
    out
}

fn check(v: f64, u: f64) -> Result<()> {
    if !(v > -1.0 && v <= u && u < 0.0) {
        return Err(Error::Inadmissible {
            what: "phi",
            detail: format!("needs -1 < v ≤ u < 0, got v = {v}, u = {u}"),
        });
    }
    Ok(())
}

/// Φ(v; u) and its derivatives.
pub fn phi_derivs(model: &InitialDataModel, v: f64, u: f64) -> Result<PhiDerivs> {
    check(v, u)?;
    let mut prev = moments(model, v, u, rule(0));
    let mut change = f64::INFINITY;
    for i in 1..STEPS.len() {
        let next = moments(model, v, u, rule(i));
        change = [
            (next.value, prev.value),
            (next.dv, prev.dv),
            (next.dvv, prev.dvv),
            (next.du, prev.du),
            (next.duv, prev.duv),
        ]
        .iter()
        .map(|(a, b)| (a - b).abs() / (1.0 + a.abs()))
        .fold(0.0, f64::max);
        if change < 1e-13 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        what: "phi (tanh-sinh)",
        nodes: rule(STEPS.len() - 1).nodes.len(),
        change,
    })
}

/// Φ(v; u).
pub fn phi(model: &InitialDataModel, v: f64, u: f64) -> Result<f64> {
    Ok(phi_derivs(model, v, u)?.value)
}
