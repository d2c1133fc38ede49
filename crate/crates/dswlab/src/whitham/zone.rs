//! The one-phase zone [x⁻, x⁺] at a fixed time, traced by continuation in
//! p = -ln(1 - s²) from the leading edge (p = 0) to the trailing edge, where
//! 1 - s² reaches TRAILING_S2C.

use super::edge::{solve_leading_edge, EdgeState};
use super::{modulus_from_p, solve_at_modulus, solve_whitham, HodographSolveResult, WhithamTriple};
use crate::error::{Error, Result};
use crate::initial_data::{breakup, InitialDataModel};
use crate::interp::{cubic_spline, Hermite};
use nalgebra::Vector3;

/// 1 - s² at which the zone is cut off on the trailing side.
pub const TRAILING_S2C: f64 = 1e-11;

/// One continuation node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneNode {
    pub p: f64,
    pub x: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub foot3: f64,
}

impl ZoneNode {
    fn from_solution(p: f64, x: f64, tr: &WhithamTriple) -> Self {
        ZoneNode {
            p,
            x,
            beta1: tr.beta1,
            beta2: tr.beta2,
            beta3: tr.beta3,
            foot3: tr.foot3,
        }
    }

    fn unknowns(&self) -> Vector3<f64> {
        Vector3::new(self.beta1, self.foot3, self.x)
    }
}

const MAX_DX: f64 = 0.005;
const MAX_DP: f64 = 0.25;
const FIRST_P: f64 = 1e-3;
const X_NOISE: f64 = 1e-9;

/// Whitham solution across the oscillation zone at one time.
#[derive(Debug, Clone)]
pub struct WhithamZone {
    model: InitialDataModel,
    t: f64,
    edge: EdgeState,
    nodes: Vec<ZoneNode>,
    x_of_p: Hermite,
    b1_of_p: Hermite,
    x3_of_p: Hermite,
    /// Running maximum of the node x values, for lookups.
    x_monotone: Vec<f64>,
}

impl WhithamZone {
    pub fn build(model: &InitialDataModel, t: f64) -> Result<Self> {
        let edge = solve_leading_edge(model, t)?;
        Self::from_edge(model, edge)
    }

    pub fn from_edge(model: &InitialDataModel, edge: EdgeState) -> Result<Self> {
        let t = edge.t;
        let prof = model.profile();
        let p_max = -TRAILING_S2C.ln();
        let mut nodes = vec![ZoneNode {
            p: 0.0,
            x: edge.x_minus,
            beta1: edge.u,
            beta2: edge.v,
            beta3: edge.v,
            foot3: prof.f_minus(edge.v),
        }];

        // small-amplitude start: δ = s²(u - v)/(2 - s²), x - x⁻ ≈ cδ²
        let (s2, _) = modulus_from_p(FIRST_P);
        let delta = s2 * (edge.u - edge.v) / (2.0 - s2);
        let dx = edge.c * delta * delta;
        let seed = Vector3::new(
            edge.u + dx / (6.0 * t + prof.f_minus_d1(edge.u)),
            prof.f_minus(edge.v - delta),
            edge.x_minus + dx,
        );
        let (res, x) = solve_at_modulus(model, FIRST_P, t, seed)?;
        nodes.push(ZoneNode::from_solution(FIRST_P, x, &res.triple));

        let mut dp = FIRST_P;
        while nodes[nodes.len() - 1].p < p_max {
            let last = nodes[nodes.len() - 1];
            let p_next = (last.p + dp).min(p_max);
            let seed = predict(&nodes, p_next);
            let attempt = solve_at_modulus(model, p_next, t, seed);
            let accepted = match attempt {
                // x saturates at x⁺ for large p; allow solver noise there
                Ok((res, x)) if x > last.x - X_NOISE && (x - last.x) <= MAX_DX => Some((res, x)),
                _ => None,
            };
            match accepted {
                Some((res, x)) => {
                    nodes.push(ZoneNode::from_solution(p_next, x, &res.triple));
                    let grow = if res.newton_iters <= 3 { 1.5 } else { 1.0 };
                    dp = (dp * grow).min(MAX_DP);
                }
                None => {
                    dp *= 0.5;
                    if dp < 1e-9 {
                        return Err(Error::Divergence {
                            what: "zone continuation",
                            iterations: nodes.len(),
                            norm: last.p,
                        });
                    }
                }
            }
        }
        let ps: Vec<f64> = nodes.iter().map(|n| n.p).collect();
        let col = |f: fn(&ZoneNode) -> f64| nodes.iter().map(f).collect::<Vec<_>>();
        Ok(WhithamZone {
            model: model.clone(),
            t,
            edge,
            x_of_p: cubic_spline(&ps, &col(|n| n.x))?,
            b1_of_p: cubic_spline(&ps, &col(|n| n.beta1))?,
            x3_of_p: cubic_spline(&ps, &col(|n| n.foot3))?,
            x_monotone: nodes
                .iter()
                .scan(f64::NEG_INFINITY, |m, n| {
                    *m = m.max(n.x);
                    Some(*m)
                })
                .collect(),
            nodes,
        })
    }

    pub fn model(&self) -> &InitialDataModel {
        &self.model
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn edge(&self) -> &EdgeState {
        &self.edge
    }

    pub fn nodes(&self) -> &[ZoneNode] {
        &self.nodes
    }

    pub fn x_minus(&self) -> f64 {
        self.edge.x_minus
    }

    pub fn x_plus(&self) -> f64 {
        self.x_monotone[self.x_monotone.len() - 1]
    }

    pub fn trailing(&self) -> ZoneNode {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_minus() && x <= self.x_plus()
    }

    /// p at position x by bisection on the spline x(p).
    pub fn p_at(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::Domain {
                what: "Whitham zone",
                value: x,
                domain: "[x⁻, x⁺]",
            });
        }
        let k = self.x_monotone.partition_point(|&xm| xm < x);
        if k == 0 {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (self.nodes[k - 1].p, self.nodes[k.min(self.nodes.len() - 1)].p);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.x_of_p.eval(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Interpolated invariants at x (no polishing).
    pub fn triple_at(&self, x: f64) -> Result<WhithamTriple> {
        let p = self.p_at(x)?;
        let (s2, s2c) = modulus_from_p(p);
        WhithamTriple::from_modulus(&self.model, self.b1_of_p.eval(p), self.x3_of_p.eval(p), s2, s2c)
    }

    /// Invariants at x, polished by the hodograph Newton solve.
    pub fn solve_at(&self, x: f64) -> Result<HodographSolveResult> {
        let seed = self.triple_at(x)?;
        if seed.s2() == 0.0 {
            return Err(Error::domain("zone solve", x, "(x⁻, x⁺]: the leading edge is degenerate"));
        }
        solve_whitham(&self.model, x, self.t, &seed)
    }
}

/// Predictor for the next node: polynomial extrapolation through the last
/// (up to) three nodes in p.
fn predict(nodes: &[ZoneNode], p: f64) -> Vector3<f64> {
    let k = nodes.len().min(3);
    let tail = &nodes[nodes.len() - k..];
    let mut out = Vector3::zeros();
    for (i, ni) in tail.iter().enumerate() {
        let mut w = 1.0;
        for (j, nj) in tail.iter().enumerate() {
            if i != j {
                w *= (p - nj.p) / (ni.p - nj.p);
            }
        }
        out += ni.unknowns() * w;
    }
    out
}

/// Trailing-edge node at time t.
pub fn trailing_edge(model: &InitialDataModel, t: f64) -> Result<ZoneNode> {
    Ok(WhithamZone::build(model, t)?.trailing())
}

/// Trailing-edge nodes at increasing times, continued in t from one zone
/// build at `ts[0]`.
pub fn trailing_edge_path(model: &InitialDataModel, ts: &[f64]) -> Result<Vec<ZoneNode>> {
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    if ts.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("trailing-edge times must increase".into()));
    }
    let p_max = -TRAILING_S2C.ln();
    let mut out = vec![trailing_edge(model, ts[0])?];
    for k in 1..ts.len() {
        let prev = out[k - 1];
        let seed = if k >= 2 {
            // linear extrapolation in t
            let pp = out[k - 2];
            let r = (ts[k] - ts[k - 1]) / (ts[k - 1] - ts[k - 2]);
            prev.unknowns() + (prev.unknowns() - pp.unknowns()) * r
        } else {
            prev.unknowns()
        };
        let node = match solve_at_modulus(model, p_max, ts[k], seed) {
            Ok((res, x)) => ZoneNode::from_solution(p_max, x, &res.triple),
            // large step or bad seed: rebuild from the leading edge
            Err(_) => trailing_edge(model, ts[k])?,
        };
        out.push(node);
    }
    Ok(out)
}

/// Hump time by marching the trailing foot X₃(t) and refining its sign change.
pub(super) fn find_hump_time(model: &InitialDataModel) -> Result<Option<f64>> {
    let b = breakup(model)?;
    let p_max = -TRAILING_S2C.ln();
    let dt = 0.02;
    let horizon = b.t_c + 10.0;
    let mut t = b.t_c + dt;
    let mut node = trailing_edge(model, t)?;
    if node.foot3 > 0.0 {
        // already over the hump at the first sample: restart closer to breakup
        let (t_fine, fine) = (b.t_c + 1e-3, trailing_edge(model, b.t_c + 1e-3)?);
        if fine.foot3 > 0.0 {
            return Ok(Some(b.t_c));
        }
        return refine(model, p_max, (t_fine, fine), (t, node)).map(Some);
    }
    while t < horizon {
        let t_next = t + dt;
        let next = match solve_at_modulus(model, p_max, t_next, node.unknowns()) {
            Ok((res, x)) => ZoneNode::from_solution(p_max, x, &res.triple),
            Err(_) => trailing_edge(model, t_next)?,
        };
        if next.foot3 > 0.0 {
            return refine(model, p_max, (t, node), (t_next, next)).map(Some);
        }
        (t, node) = (t_next, next);
    }
    Ok(None)
}

/// Secant/bisection on X₃(t) = 0 between a bracketing pair.
fn refine(model: &InitialDataModel, p_max: f64, lo: (f64, ZoneNode), hi: (f64, ZoneNode)) -> Result<f64> {
    let (mut a, mut na) = lo;
    let (mut b, mut nb) = hi;
    for _ in 0..100 {
        if b - a < 1e-12 {
            break;
        }
        let secant = a - na.foot3 * (b - a) / (nb.foot3 - na.foot3);
        let t = if secant > a + 0.01 * (b - a) && secant < b - 0.01 * (b - a) {
            secant
        } else {
            0.5 * (a + b)
        };
        let seed = na.unknowns() + (nb.unknowns() - na.unknowns()) * ((t - a) / (b - a));
        let (res, x) = solve_at_modulus(model, p_max, t, seed)?;
        let n = ZoneNode::from_solution(p_max, x, &res.triple);
        if n.foot3.abs() < 1e-13 {
            return Ok(t);
        }
        if n.foot3 > 0.0 {
            (b, nb) = (t, n);
        } else {
            (a, na) = (t, n);
        }
    }
    Ok(0.5 * (a + b))
}
