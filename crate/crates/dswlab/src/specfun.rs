//! Special functions used by the asymptotic formulas: complete elliptic
//! integrals (AGM), the Jacobi theta function θ₃ in nome form, and Airy Ai.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Largest modulus accepted by [`EllipticModulus`]; K diverges at s = 1.
pub const MODULUS_CUTOFF: f64 = 1.0 - 1e-12;

/// Elliptic modulus `s` together with `s²` and the complement `1 - s²`.
///
/// The complement is stored separately so that callers near the degenerate
/// limit s → 1 (which know `1 - s²` as a ratio of differences) keep full
/// relative accuracy in K and in the nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    pub s: f64,
    pub s2: f64,
    s2c: f64,
}

/// The complete integrals that belong to one modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompleteIntegrals {
    pub k: f64,
    pub e: f64,
    /// K'(s) = K(√(1 - s²)).
    pub k_prime: f64,
    /// 1 - E/K, summed without cancellation (≈ s²/2 for small s).
    pub one_minus_e_over_k: f64,
}

impl CompleteIntegrals {
    /// Real nome exp(-πK'/K) of the purely imaginary period iK'/K.
    pub fn nome(&self) -> f64 {
        (-PI * self.k_prime / self.k).exp()
    }
}

impl EllipticModulus {
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..MODULUS_CUTOFF).contains(&s) {
            return Err(Error::domain("elliptic modulus", s, "[0, 1 - 1e-12)"));
        }
        Ok(EllipticModulus {
            s,
            s2: s * s,
            s2c: (1.0 - s) * (1.0 + s),
        })
    }

    /// From s² and 1 - s² supplied independently (they must sum to 1 up to
    /// rounding).
    pub fn from_squares(s2: f64, s2c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s2) || !(0.0..=1.0).contains(&s2c) || (s2 + s2c - 1.0).abs() > 1e-12
        {
            return Err(Error::domain("elliptic modulus squared", s2, "[0, 1)"));
        }
        let s = s2.sqrt();
        if s2c < 2e-12 {
            return Err(Error::domain("elliptic modulus", s, "[0, 1 - 1e-12)"));
        }
        Ok(EllipticModulus { s, s2, s2c })
    }

    pub fn complement_squared(&self) -> f64 {
        self.s2c
    }

    pub fn integrals(&self) -> CompleteIntegrals {
        let (a, sum) = agm_with_sum(self.s2c.sqrt(), self.s2);
        let k = PI / (2.0 * a);
        let (ap, _) = agm_with_sum(self.s, self.s2c);
        let k_prime = PI / (2.0 * ap);
        CompleteIntegrals {
            k,
            e: k * (1.0 - sum),
            k_prime,
            one_minus_e_over_k: sum,
        }
    }

    pub fn k(&self) -> f64 {
        self.integrals().k
    }

    pub fn e(&self) -> f64 {
        self.integrals().e
    }

    pub fn k_prime(&self) -> f64 {
        self.integrals().k_prime
    }

    pub fn nome(&self) -> f64 {
        self.integrals().nome()
    }
}

/// AGM(1, b) together with Σ 2^{n-1} c_n², where c_0² = `c0_sq` = 1 - b².
/// The differences use c_{n+1} = c_n²/(4 a_{n+1}), which never cancels.
fn agm_with_sum(b0: f64, c0_sq: f64) -> (f64, f64) {
    let mut a = 1.0f64;
    let mut b = b0;
    let mut c = c0_sq.sqrt();
    let mut pow = 0.5;
    let mut sum = pow * c * c;
    for _ in 0..40 {
        let an = 0.5 * (a + b);
        let cn = c * c / (4.0 * an);
        b = (a * b).sqrt();
        a = an;
        c = cn;
        pow *= 2.0;
        sum += pow * c * c;
        if c < 1e-17 * a {
            break;
        }
    }
    (a, sum)
}

/// K(s), complete elliptic integral of the first kind in the modulus.
pub fn elliptic_k(s: f64) -> Result<f64> {
    Ok(EllipticModulus::new(s)?.k())
}

/// K'(s) = K(√(1 - s²)).
pub fn elliptic_k_prime(s: f64) -> Result<f64> {
    Ok(EllipticModulus::new(s)?.k_prime())
}

/// E(s), complete elliptic integral of the second kind; defined up to s = 1.
pub fn elliptic_e(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain("elliptic_e modulus", s, "[0, 1]"));
    }
    if s == 1.0 {
        return Ok(1.0);
    }
    let s2c = (1.0 - s) * (1.0 + s);
    let (a, sum) = agm_with_sum(s2c.sqrt(), s * s);
    Ok(PI / (2.0 * a) * (1.0 - sum))
}

/// Argument of θ₃ in nome form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgument {
    pub z: f64,
    pub nome: f64,
}

/// θ₃ and its first two z-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl ThetaValue {
    /// ∂²_z log θ₃.
    pub fn log_second_derivative(&self) -> f64 {
        let r = self.d1 / self.value;
        self.d2 / self.value - r * r
    }
}

/// θ₃(z | nome) = Σ_{n∈ℤ} nome^{n²} cos(2πnz).
pub fn theta3(z: f64, nome: f64) -> Result<f64> {
    Ok(theta3_derivatives(ThetaArgument { z, nome })?.value)
}

/// θ₃ with derivatives; the series stops once a term drops below 1e-16 of
/// the running sum.
pub fn theta3_derivatives(arg: ThetaArgument) -> Result<ThetaValue> {
    check_nome(arg.nome)?;
    Ok(theta3_series(arg.z, arg.nome, usize::MAX))
}

/// θ₃ with at most `terms` positive-n terms (for truncation studies).
pub fn theta3_truncated(arg: ThetaArgument, terms: usize) -> Result<ThetaValue> {
    check_nome(arg.nome)?;
    Ok(theta3_series(arg.z, arg.nome, terms))
}

fn check_nome(nome: f64) -> Result<()> {
    if !(0.0..1.0).contains(&nome) {
        return Err(Error::domain("theta nome", nome, "[0, 1)"));
    }
    Ok(())
}

fn theta3_series(z: f64, nome: f64, max_terms: usize) -> ThetaValue {
    let mut value = 1.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    if nome == 0.0 {
        return ThetaValue { value, d1, d2 };
    }
    let ln_q = nome.ln();
    let mut n = 1usize;
    while n <= max_terms {
        let nf = n as f64;
        let w = 2.0 * (ln_q * nf * nf).exp();
        let arg = 2.0 * PI * nf * z;
        let (s, c) = arg.sin_cos();
        let k = 2.0 * PI * nf;
        value += w * c;
        d1 -= w * k * s;
        d2 -= w * k * k * c;
        if w * k * k < 1e-16 * value.abs() {
            break;
        }
        n += 1;
    }
    ThetaValue { value, d1, d2 }
}

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = -0.258_819_403_792_806_8;
/// Switch between the Taylor region and the asymptotic expansions.
const AIRY_SWITCH: f64 = 8.0;

/// Ai(z) for real z.
///
/// Beyond |z| = 8 the classical asymptotic expansions are summed to their
/// smallest term. Inside, the plain Maclaurin series cancels badly, so the
/// ODE Ai″ = zAi is integrated by re-centered Taylor series in unit steps:
/// forward from the exact values at 0 for z ≤ 1, backward from the
/// asymptotic values at 8 (the stable direction) for 1 < z ≤ 8.
pub fn airy_ai(z: f64) -> f64 {
    airy_pair(z).0
}

/// Ai′(z).
pub fn airy_ai_prime(z: f64) -> f64 {
    airy_pair(z).1
}

/// Leading-order right tail exp(-⅔z^{3/2})/(2√π z^{1/4}).
pub fn airy_ai_leading_asymptotic(z: f64) -> f64 {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    (-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25))
}

fn airy_pair(z: f64) -> (f64, f64) {
    if z > AIRY_SWITCH {
        airy_right_asymptotic(z)
    } else if z < -AIRY_SWITCH {
        (airy_left_asymptotic(z), f64::NAN)
    } else if z <= 1.0 {
        integrate_airy(0.0, AI0, AIP0, z)
    } else {
        let (a, ap) = airy_right_asymptotic(AIRY_SWITCH);
        integrate_airy(AIRY_SWITCH, a, ap, z)
    }
}

/// u_k coefficients of the Airy asymptotic expansions.
fn airy_u_coeffs(n: usize) -> Vec<f64> {
    let mut u = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
    }
    u
}

fn airy_right_asymptotic(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = airy_u_coeffs(60);
    let (mut su, mut sv) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut pow = 1.0;
    let mut sign = 1.0;
    for (k, uk) in u.iter().enumerate() {
        let kf = k as f64;
        let term = uk * pow;
        if term > last {
            break;
        }
        let vk = if k == 0 { 1.0 } else { -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk };
        su += sign * term;
        sv += sign * vk * pow;
        last = term;
        pow /= zeta;
        sign = -sign;
    }
    let pre = (-zeta).exp() / (2.0 * PI.sqrt());
    (pre * su / z.powf(0.25), -pre * sv * z.powf(0.25))
}

fn airy_left_asymptotic(z: f64) -> f64 {
    let x = -z;
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = airy_u_coeffs(60);
    let (mut even, mut odd) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut pow = 1.0;
    for (k, uk) in u.iter().enumerate() {
        let term = uk * pow;
        if term > last {
            break;
        }
        // (-1)^{k/2} on the even and odd sub-series
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        last = term;
        pow /= zeta;
    }
    let phase = zeta - PI / 4.0;
    (phase.cos() * even + phase.sin() * odd) / (PI.sqrt() * x.powf(0.25))
}

/// Propagate (y, y′) of y″ = zy from z0 to z1 in Taylor steps of length ≤ 1.
fn integrate_airy(z0: f64, y0: f64, yp0: f64, z1: f64) -> (f64, f64) {
    let steps = (z1 - z0).abs().ceil().max(1.0) as usize;
    let h = (z1 - z0) / steps as f64;
    let (mut y, mut yp) = (y0, yp0);
    let mut zc = z0;
    for _ in 0..steps {
        (y, yp) = taylor_step(zc, y, yp, h);
        zc += h;
    }
    (y, yp)
}

fn taylor_step(z0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // c_{k+2} = (z0 c_k + c_{k-1}) / ((k+2)(k+1))
    let (mut cm1, mut c0, mut c1) = (0.0, y, yp);
    let mut val = c0 + c1 * h;
    let mut der = c1;
    let mut hp = h; // h^{k+1} for the coefficient c_{k+2} below
    let mut small = 0;
    for k in 0..80 {
        let kf = k as f64;
        let c2 = (z0 * c0 + cm1) / ((kf + 2.0) * (kf + 1.0));
        let dterm = (kf + 2.0) * c2 * hp;
        hp *= h;
        let term = c2 * hp;
        val += term;
        der += dterm;
        if term.abs() < 1e-18 * (val.abs() + 1e-300) && dterm.abs() < 1e-18 * (der.abs() + 1e-300) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        cm1 = c0;
        c0 = c1;
        c1 = c2;
    }
    (val, der)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_moduli() {
        assert_eq!(elliptic_k(0.0).unwrap(), PI / 2.0);
        assert!((elliptic_e(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_e(1.1).is_err());
    }

    #[test]
    fn one_minus_e_over_k_has_no_cancellation() {
        let m = EllipticModulus::from_squares(1e-20, 1.0 - 1e-20).unwrap();
        let d = m.integrals().one_minus_e_over_k;
        assert!((d / 1e-20 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn theta_zero_nome_is_one() {
        for z in [-0.3, 0.0, 0.7] {
            assert_eq!(theta3(z, 0.0).unwrap(), 1.0);
        }
        assert!(theta3(0.0, 1.0).is_err());
    }

    #[test]
    fn airy_origin_values() {
        assert!((airy_ai(0.0) - AI0).abs() < 1e-16);
        assert!((airy_ai_prime(0.0) - AIP0).abs() < 1e-16);
    }
}
