//! Hastings–McLeod solution of Painlevé-II, A″ = zA + 2A³, by a relaxed
//! Chebyshev τ-method on [z_l, z_r] with asymptotic tails outside.

use crate::chebyshev::{clenshaw, derivative_coeffs, derivative_matrix, lobatto_points, ChebyshevTransform};
use crate::error::{Error, Result};
use crate::specfun::{airy_ai, airy_ai_leading_asymptotic};
use std::f64::consts::SQRT_2;

/// Two-term-corrected growth at -∞: √(-z/2) - (-z)^{-5/2}/(8√2) - 73(-z)^{-11/2}/(128√2).
pub fn left_asymptotic(z: f64) -> f64 {
    let w = -z;
    (w / 2.0).sqrt() - w.powf(-2.5) / (8.0 * SQRT_2) - 73.0 * w.powf(-5.5) / (128.0 * SQRT_2)
}

/// Left boundary value. The next omitted term is of size 10657/(1024√2)·|z|^{-17/2},
/// about 2e-8 at z = -10, so the range is limited to z_l ≤ -8.
pub fn hm_boundary_left(z_left: f64) -> Result<f64> {
    if !(z_left <= -8.0) {
        return Err(Error::domain("left boundary", z_left, "(-inf, -8]"));
    }
    Ok(left_asymptotic(z_left))
}

/// Right boundary value from the leading Airy asymptotic.
pub fn hm_boundary_right(z_right: f64) -> Result<f64> {
    if !(z_right >= 8.0) {
        return Err(Error::domain("right boundary", z_right, "[8, inf)"));
    }
    Ok(airy_ai_leading_asymptotic(z_right))
}

/// Starting iterate (1+z²)^{1/4} / ((1+e^z)√2).
pub fn initial_iterate(z: f64) -> f64 {
    (1.0 + z * z).powf(0.25) / ((1.0 + z.exp()) * SQRT_2)
}

/// Which formula continues the solution to the right of z_r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightTail {
    /// exp(-⅔z^{3/2})/(2√π z^{1/4}), the formula used for the boundary value.
    LeadingAsymptotic,
    /// Ai(z) itself.
    Airy,
}

#[derive(Debug, Clone)]
pub struct HmConfig {
    pub z_left: f64,
    pub z_right: f64,
    pub degree: usize,
    pub relaxation: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub divergence_bound: f64,
    pub right_tail: RightTail,
}

impl Default for HmConfig {
    fn default() -> Self {
        HmConfig {
            z_left: -10.0,
            z_right: 10.0,
            degree: 128,
            relaxation: 0.009,
            tolerance: 1e-14,
            max_iterations: 1_000_000,
            divergence_bound: 1e3,
            right_tail: RightTail::LeadingAsymptotic,
        }
    }
}

/// Chebyshev expansion on [z_left, z_right].
#[derive(Debug, Clone)]
pub struct ChebyshevSolution {
    pub coeffs: Vec<f64>,
    pub z_left: f64,
    pub z_right: f64,
}

impl ChebyshevSolution {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn to_unit(&self, z: f64) -> f64 {
        (2.0 * z - self.z_left - self.z_right) / (self.z_right - self.z_left)
    }

    pub fn eval(&self, z: f64) -> f64 {
        clenshaw(&self.coeffs, self.to_unit(z))
    }

    /// |Ã_N| / max|Ã_n|, the spectral resolution indicator.
    pub fn tail_ratio(&self) -> f64 {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        self.coeffs[self.degree()].abs() / max
    }
}

#[derive(Debug, Clone)]
pub struct HastingsMcLeodSolution {
    pub core: ChebyshevSolution,
    pub right_tail: RightTail,
    pub iterations: usize,
    /// Max-norm change of the final iteration.
    pub last_update: f64,
    d2_coeffs: Vec<f64>,
}

impl HastingsMcLeodSolution {
    /// Global evaluator: Chebyshev sum inside, asymptotic tails outside.
    pub fn eval(&self, z: f64) -> f64 {
        if z < self.core.z_left {
            left_asymptotic(z)
        } else if z > self.core.z_right {
            match self.right_tail {
                RightTail::LeadingAsymptotic => airy_ai_leading_asymptotic(z),
                RightTail::Airy => airy_ai(z),
            }
        } else {
            self.core.eval(z)
        }
    }

    /// A″(z) from the Chebyshev core (z inside the interval).
    pub fn second_derivative(&self, z: f64) -> f64 {
        clenshaw(&self.d2_coeffs, self.core.to_unit(z))
    }

    /// A″ - zA - 2A³ from the core.
    pub fn residual(&self, z: f64) -> f64 {
        let a = self.core.eval(z);
        self.second_derivative(z) - z * a - 2.0 * a * a * a
    }

    /// Residual maximum over the interior collocation points.
    pub fn max_collocation_residual(&self) -> f64 {
        let n = self.core.degree();
        let (zl, zr) = (self.core.z_left, self.core.z_right);
        lobatto_points(n)[1..n]
            .iter()
            .map(|x| self.residual(zl + 0.5 * (x + 1.0) * (zr - zl)).abs())
            .fold(0.0, f64::max)
    }
}

/// Solve with explicit parameters (other settings at their defaults).
pub fn solve_hastings_mcleod(
    z_left: f64,
    z_right: f64,
    degree: usize,
    relaxation: f64,
    tolerance: f64,
) -> Result<HastingsMcLeodSolution> {
    solve(&HmConfig {
        z_left,
        z_right,
        degree,
        relaxation,
        tolerance,
        ..HmConfig::default()
    })
}

/// Relaxed fixed-point iteration a ← μL⁻¹ r(a) + (1-μ)a, where L is the
/// scaled second-derivative matrix whose last two rows carry the boundary
/// conditions and r(a) holds the coefficients of zA + 2A³.
pub fn solve(cfg: &HmConfig) -> Result<HastingsMcLeodSolution> {
    let n = cfg.degree;
    if n < 8 {
        return Err(Error::Config(format!("Chebyshev degree {n} too small")));
    }
    if !(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0) || !(cfg.tolerance > 0.0) {
        return Err(Error::Config("relaxation must be in (0, 1] and tolerance positive".into()));
    }
    let a_left = hm_boundary_left(cfg.z_left)?;
    let a_right = hm_boundary_right(cfg.z_right)?;
    let (zl, zr) = (cfg.z_left, cfg.z_right);

    let transform = ChebyshevTransform::new(n);
    let z: Vec<f64> = lobatto_points(n)
        .iter()
        .map(|x| zl + 0.5 * (x + 1.0) * (zr - zl))
        .collect();

    let d = derivative_matrix(n);
    let scale = (2.0 / (zr - zl)).powi(2);
    let mut l = &d * &d * scale;
    for m in 0..=n {
        l[(n - 1, m)] = 1.0;
        l[(n, m)] = if m % 2 == 0 { 1.0 } else { -1.0 };
    }
    let lu = l.lu();

    let mut values: Vec<f64> = z.iter().map(|&z| initial_iterate(z)).collect();
    let mut coeffs = transform.values_to_coeffs(&values);
    let mu = cfg.relaxation;
    let mut update = f64::INFINITY;

    for it in 1..=cfg.max_iterations {
        let nonlinear: Vec<f64> = z
            .iter()
            .zip(&values)
            .map(|(&z, &a)| z * a + 2.0 * a * a * a)
            .collect();
        let mut rhs = nalgebra::DVector::from_vec(transform.values_to_coeffs(&nonlinear));
        rhs[n - 1] = a_right;
        rhs[n] = a_left;
        let solved = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Config("singular collocation matrix".into()))?;
        for (c, s) in coeffs.iter_mut().zip(solved.iter()) {
            *c = mu * s + (1.0 - mu) * *c;
        }
        let next = transform.coeffs_to_values(&coeffs);
        update = next
            .iter()
            .zip(&values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let norm = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        values = next;
        if !norm.is_finite() || norm > cfg.divergence_bound {
            return Err(Error::Divergence {
                what: "Hastings-McLeod iteration",
                iterations: it,
                norm,
            });
        }
        if update < cfg.tolerance {
            let core = ChebyshevSolution {
                coeffs: coeffs.clone(),
                z_left: zl,
                z_right: zr,
            };
            let d2_coeffs: Vec<f64> = derivative_coeffs(&derivative_coeffs(&coeffs))
                .into_iter()
                .map(|c| c * scale)
                .collect();
            return Ok(HastingsMcLeodSolution {
                core,
                right_tail: cfg.right_tail,
                iterations: it,
                last_update: update,
                d2_coeffs,
            });
        }
    }
    Err(Error::NoConvergence {
        what: "Hastings-McLeod iteration",
        iterations: cfg.max_iterations,
        residual: update,
    })
}
