//! Asymptotic descriptions of the small-dispersion limit at a fixed time:
//! the Hopf solution outside the oscillation zone, the modulated elliptic
//! (theta-function) solution inside it, its small-amplitude limit at the
//! leading edge, and the Painlevé-II multiscale solution that resolves the
//! leading edge on the ε^{2/3} scale.

use crate::compare::ZoneBounds;
use crate::error::{Error, Result};
use crate::initial_data::{hopf_solve, InitialDataModel};
use crate::painleve2::{self, HastingsMcLeodSolution, HmConfig};
use crate::specfun::{theta3_derivatives, ThetaArgument};
use crate::whitham::{q_at, EdgeState, WhithamTriple, WhithamZone};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Hastings–McLeod solution with the default solver settings, computed once.
pub fn hastings_mcleod() -> Result<&'static HastingsMcLeodSolution> {
    static CELL: OnceLock<HastingsMcLeodSolution> = OnceLock::new();
    if let Some(s) = CELL.get() {
        return Ok(s);
    }
    let s = painleve2::solve(&HmConfig::default())?;
    Ok(CELL.get_or_init(|| s))
}

/// Elliptic solution data at one point of the zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticSolutionParams {
    pub triple: WhithamTriple,
    pub q: f64,
    pub alpha: f64,
    /// dΩ/dx = √(β₁-β₃)/(2εK(s)).
    pub wavenumber: f64,
    /// Ω = dΩ/dx · (x - 2tΣβ - q).
    pub omega: f64,
    pub nome: f64,
}

impl EllipticSolutionParams {
    /// Σβ + 2α + 2ε²∂²_x log θ₃(Ω) with the invariants frozen.
    pub fn value(&self, epsilon: f64) -> Result<f64> {
        let th = theta3_derivatives(ThetaArgument {
            z: self.omega,
            nome: self.nome,
        })?;
        let k = self.wavenumber;
        Ok(self.triple.sum() + 2.0 * self.alpha + 2.0 * epsilon * epsilon * k * k * th.log_second_derivative())
    }
}

/// Elliptic parameters for a given triple, position and time.
pub fn elliptic_params(model: &InitialDataModel, triple: &WhithamTriple, x: f64, t: f64, epsilon: f64) -> Result<EllipticSolutionParams> {
    let ell = triple.elliptic()?;
    let q = q_at(model, triple)?.q;
    let wavenumber = (triple.beta1 - triple.beta3).sqrt() / (2.0 * epsilon * ell.integrals.k);
    Ok(EllipticSolutionParams {
        triple: *triple,
        q,
        alpha: ell.alpha,
        wavenumber,
        omega: wavenumber * (x - 2.0 * t * triple.sum() - q),
        nome: ell.nome,
    })
}

/// Truncation order of the multiscale solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiscaleOrder {
    /// u + ε^{1/3}a cos(ψ/ε).
    OneThird,
    /// Adds ε^{2/3}[a²(cos(2ψ/ε) - 1)/(8(u-v)) + y/(6t + f₋′(u))].
    TwoThirds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiscaleParams {
    pub edge: EdgeState,
    /// ε^{-2/3}(x - x⁻).
    pub y: f64,
    /// (v_t/(6(u-v)))^{1/3}·y; positive on the Hopf side.
    pub z: f64,
    /// Signed amplitude 4·6^{-1/3}v_t^{1/3}(u-v)^{1/6}A(z).
    pub a: f64,
    /// φ₀ + 2ε^{2/3}y√(u-v).
    pub psi: f64,
    pub order: MultiscaleOrder,
}

/// Scale factors of the amplitude map: z = z_scale·y, a = a_scale·A(z).
fn multiscale_scales(edge: &EdgeState) -> (f64, f64) {
    let gap = edge.u - edge.v;
    let z_scale = (edge.v_t / (6.0 * gap)).cbrt();
    let a_scale = 4.0 * 6f64.powf(-1.0 / 3.0) * edge.v_t.cbrt() * gap.powf(1.0 / 6.0);
    (z_scale, a_scale)
}

/// All evaluators at one time; holds the Whitham zone and the edge data.
#[derive(Debug, Clone)]
pub struct Asymptotics {
    model: InitialDataModel,
    zone: WhithamZone,
    hm: &'static HastingsMcLeodSolution,
}

impl Asymptotics {
    pub fn new(model: &InitialDataModel, t: f64) -> Result<Self> {
        Self::from_zone(WhithamZone::build(model, t)?)
    }

    pub fn from_zone(zone: WhithamZone) -> Result<Self> {
        Ok(Asymptotics {
            model: zone.model().clone(),
            zone,
            hm: hastings_mcleod()?,
        })
    }

    pub fn t(&self) -> f64 {
        self.zone.t()
    }

    pub fn zone(&self) -> &WhithamZone {
        &self.zone
    }

    pub fn edge(&self) -> &EdgeState {
        self.zone.edge()
    }

    /// Single-valued Hopf solution outside the zone. Left of the zone the
    /// upper branch continues, right of it the lower one.
    pub fn hopf(&self, x: f64) -> Result<f64> {
        let h = hopf_solve(&self.model, x, self.t())?;
        let b = h.branches();
        if b.len() == 1 {
            return Ok(b[0].u);
        }
        if x <= self.zone.x_minus() {
            Ok(b.iter().map(|b| b.u).fold(f64::NEG_INFINITY, f64::max))
        } else if x >= self.zone.x_plus() {
            Ok(b.iter().map(|b| b.u).fold(f64::INFINITY, f64::min))
        } else {
            Err(Error::domain("Hopf solution", x, "outside the oscillation zone"))
        }
    }

    pub fn elliptic_params(&self, x: f64, epsilon: f64) -> Result<EllipticSolutionParams> {
        let triple = self.zone.solve_at(x)?.triple;
        elliptic_params(&self.model, &triple, x, self.t(), epsilon)
    }

    /// Elliptic solution for x ∈ (x⁻, x⁺).
    pub fn elliptic(&self, x: f64, epsilon: f64) -> Result<f64> {
        if !(x > self.zone.x_minus() && x < self.zone.x_plus()) {
            return Err(Error::domain("elliptic solution", x, "(x⁻, x⁺)"));
        }
        self.elliptic_params(x, epsilon)?.value(epsilon)
    }

    /// Elliptic inside the zone, Hopf outside.
    pub fn elliptic_hopf(&self, x: f64, epsilon: f64) -> Result<f64> {
        if x > self.zone.x_minus() && x < self.zone.x_plus() {
            self.elliptic(x, epsilon)
        } else {
            self.hopf(x)
        }
    }

    /// |δ| with x - x⁻ = cδ² at the leading edge (β₂,₃ = v ± |δ|).
    pub fn small_amplitude_delta(&self, x: f64) -> Result<f64> {
        let e = self.edge();
        if x < e.x_minus {
            return Err(Error::domain("small-amplitude solution", x, "[x⁻, ∞)"));
        }
        Ok(((x - e.x_minus) / e.c).sqrt())
    }

    /// Phase φ₀ + φ₂ = φ₀ + 2√(u-v)(x - x⁻) of the small-amplitude limit.
    pub fn small_amplitude_phase(&self, x: f64) -> f64 {
        let e = self.edge();
        e.phi0 + 2.0 * (e.u - e.v).sqrt() * (x - e.x_minus)
    }

    /// u + (x - x⁻)/(6t + f₋′(u)) + 2δ cos(Θ/ε) + δ²(cos(2Θ/ε) - 1)/(2(u-v)),
    /// Θ = φ₀ + φ₂. Here δ carries the sign of the multiscale amplitude
    /// (δ = ε^{1/3}a/2 with a < 0), which is what the theta expansion gives:
    /// θ₃ ≈ 1 + 2·nome·cos 2πΩ puts a minus sign on the first harmonic.
    pub fn small_amplitude(&self, x: f64, epsilon: f64) -> Result<f64> {
        let e = self.edge();
        let delta = -self.small_amplitude_delta(x)?;
        let theta = self.small_amplitude_phase(x) / epsilon;
        let slope = 6.0 * e.t + self.model.profile().f_minus_d1(e.u);
        Ok(e.u
            + (x - e.x_minus) / slope
            + 2.0 * delta * theta.cos()
            + delta * delta * ((2.0 * theta).cos() - 1.0) / (2.0 * (e.u - e.v)))
    }

    /// Amplitude a(y) of the multiscale solution (k(t) = 0).
    pub fn amplitude(&self, y: f64) -> f64 {
        let (zs, as_) = multiscale_scales(self.edge());
        as_ * self.hm.eval(zs * y)
    }

    /// 4(u-v)a_yy - ⅔v_t y a - a³/2 with a_yy by a fourth-order central
    /// difference of step h.
    pub fn amplitude_ode_residual(&self, y: f64, h: f64) -> f64 {
        let e = self.edge();
        let a = |y: f64| self.amplitude(y);
        let a_yy = (-a(y + 2.0 * h) + 16.0 * a(y + h) - 30.0 * a(y) + 16.0 * a(y - h) - a(y - 2.0 * h)) / (12.0 * h * h);
        let av = a(y);
        4.0 * (e.u - e.v) * a_yy - 2.0 / 3.0 * e.v_t * y * av - 0.5 * av * av * av
    }

    pub fn multiscale_params(&self, x: f64, epsilon: f64, order: MultiscaleOrder) -> MultiscaleParams {
        let e = *self.edge();
        let y = (x - e.x_minus) / epsilon.powf(2.0 / 3.0);
        let (zs, as_) = multiscale_scales(&e);
        let z = zs * y;
        MultiscaleParams {
            edge: e,
            y,
            z,
            a: as_ * self.hm.eval(z),
            psi: e.phi0 + 2.0 * epsilon.powf(2.0 / 3.0) * y * (e.u - e.v).sqrt(),
            order,
        }
    }

    pub fn multiscale(&self, x: f64, epsilon: f64, order: MultiscaleOrder) -> f64 {
        let p = self.multiscale_params(x, epsilon, order);
        let e = &p.edge;
        let phase = p.psi / epsilon;
        let mut u = e.u + epsilon.cbrt() * p.a * phase.cos();
        if order == MultiscaleOrder::TwoThirds {
            let slope = 6.0 * e.t + self.model.profile().f_minus_d1(e.u);
            u += epsilon.powf(2.0 / 3.0)
                * (p.a * p.a * ((2.0 * phase).cos() - 1.0) / (8.0 * (e.u - e.v)) + p.y / slope);
        }
        u
    }

    /// Patched solution: Hopf left of the zone, multiscale (order ε^{1/3})
    /// inside it, elliptic to the right within the Whitham interval, Hopf
    /// beyond x⁺.
    pub fn composite(&self, x: f64, epsilon: f64, zone: &ZoneBounds) -> Result<f64> {
        if x < zone.left {
            self.hopf(x)
        } else if x <= zone.right {
            Ok(self.multiscale(x, epsilon, MultiscaleOrder::OneThird))
        } else {
            self.elliptic_hopf(x, epsilon)
        }
    }
}

/// Elliptic solution at a single point (builds the zone at t).
pub fn elliptic_solution(model: &InitialDataModel, x: f64, t: f64, epsilon: f64) -> Result<f64> {
    Asymptotics::new(model, t)?.elliptic(x, epsilon)
}

/// Small-amplitude solution at a single point (builds the zone at t).
pub fn small_amplitude_solution(model: &InitialDataModel, x: f64, t: f64, epsilon: f64) -> Result<f64> {
    Asymptotics::new(model, t)?.small_amplitude(x, epsilon)
}

/// Multiscale solution at a single point (builds the zone at t).
pub fn multiscale_solution(model: &InitialDataModel, x: f64, t: f64, epsilon: f64, order: MultiscaleOrder) -> Result<f64> {
    Ok(Asymptotics::new(model, t)?.multiscale(x, epsilon, order))
}

/// Composite solution at a single point (builds the zone at t).
pub fn composite_solution(model: &InitialDataModel, x: f64, t: f64, epsilon: f64, zone: &ZoneBounds) -> Result<f64> {
    Asymptotics::new(model, t)?.composite(x, epsilon, zone)
}

/// Full elliptic phase 2πεΩ, for comparison with φ₀ + φ₂.
pub fn elliptic_phase(p: &EllipticSolutionParams, epsilon: f64) -> f64 {
    2.0 * PI * epsilon * p.omega
}
