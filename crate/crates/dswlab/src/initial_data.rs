//! Initial profiles u₀, their inverse branches, the Hopf solution by
//! characteristics, and the point of gradient catastrophe.
//!
//! Admissible data are negative with a single minimum u₀(0) = -1 and decay
//! at infinity. The decreasing branch (x < 0) has inverse f₋ and the
//! increasing branch (x > 0) has inverse f₊, both defined on [-1, 0).

use crate::error::{Error, Result};
use crate::interp::{cubic_spline, monotone_cubic, Hermite};
use std::fmt;
use std::path::Path;
use std::sync::{Arc, OnceLock};

/// A concrete initial profile. Branch inverses are called on the open
/// interval (-1, 0) only; range checks live in [`InitialDataModel`].
pub trait Profile: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn u0(&self, x: f64) -> f64;
    fn u0_prime(&self, x: f64) -> f64;
    fn f_minus(&self, u: f64) -> f64;
    fn f_plus(&self, u: f64) -> f64;
    fn f_minus_d1(&self, u: f64) -> f64;
    fn f_minus_d2(&self, u: f64) -> f64;
    fn f_minus_d3(&self, u: f64) -> f64;
    /// Half-width of the interval on which the profile is sampled for checks.
    fn half_width(&self) -> f64 {
        15.0
    }
}

/// u₀(x) = -sech²x with closed-form inverses f∓(u) = ∓artanh√(1+u).
#[derive(Debug, Clone, Copy, Default)]
pub struct Sech2;

impl Sech2 {
    /// artanh(√(1+u)) with 1 - √(1+u) = -u/(1 + √(1+u)) to stay accurate near u = 0.
    fn branch(u: f64) -> f64 {
        let y = (1.0 + u).sqrt();
        let one_minus_y = -u / (1.0 + y);
        0.5 * ((1.0 + y) / one_minus_y).ln()
    }
}

impl Profile for Sech2 {
    fn name(&self) -> String {
        "sech2".into()
    }

    fn u0(&self, x: f64) -> f64 {
        let c = x.cosh();
        -1.0 / (c * c)
    }

    fn u0_prime(&self, x: f64) -> f64 {
        let c = x.cosh();
        2.0 * x.tanh() / (c * c)
    }

    fn f_minus(&self, u: f64) -> f64 {
        -Self::branch(u)
    }

    fn f_plus(&self, u: f64) -> f64 {
        Self::branch(u)
    }

    fn f_minus_d1(&self, u: f64) -> f64 {
        1.0 / (2.0 * u * (1.0 + u).sqrt())
    }

    fn f_minus_d2(&self, u: f64) -> f64 {
        let w = 1.0 + u;
        -(3.0 * u + 2.0) / (4.0 * u * u * w * w.sqrt())
    }

    fn f_minus_d3(&self, u: f64) -> f64 {
        let w = 1.0 + u;
        (15.0 * u * u + 20.0 * u + 8.0) / (8.0 * u * u * u * w * w * w.sqrt())
    }
}

/// Profile given by samples, interpolated by a monotone cubic. Inverses are
/// computed by safeguarded Newton on each branch. f₋″ and f₋‴ come from the
/// inverse-function formulas with u₀′, u₀″, u₀‴ of a C² spline through the
/// same samples: the monotone cubic is only C¹, and differencing its inverse
/// three times picks up the jumps of u₀″ at every node.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    label: String,
    curve: Hermite,
    smooth: Hermite,
    x_min: f64,
    lo: f64,
    hi: f64,
}

impl SampledProfile {
    pub fn new(label: impl Into<String>, xs: &[f64], us: &[f64]) -> Result<Self> {
        let curve = monotone_cubic(xs, us)?;
        let smooth = cubic_spline(xs, us)?;
        let (i_min, _) = us
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bi, bu), (i, &u)| if u < bu { (i, u) } else { (bi, bu) });
        // refine the minimiser inside the neighbouring cells
        let a = xs[i_min.saturating_sub(1)];
        let b = xs[(i_min + 1).min(xs.len() - 1)];
        let x_min = golden_section_min(|x| curve.eval(x), a, b, 1e-12);
        Ok(SampledProfile {
            label: label.into(),
            lo: xs[0],
            hi: xs[xs.len() - 1],
            curve,
            smooth,
            x_min,
        })
    }

    /// Location of the sampled minimum.
    pub fn argmin(&self) -> f64 {
        self.x_min
    }

    /// Solve u₀(x) = u on [a, b] where u₀ is monotone.
    fn invert(&self, u: f64, a: f64, b: f64) -> f64 {
        let g = |x: f64| self.curve.eval(x) - u;
        let (mut lo, mut hi) = (a, b);
        let (glo, ghi) = (g(lo), g(hi));
        if glo * ghi > 0.0 {
            return if glo.abs() < ghi.abs() { lo } else { hi };
        }
        let increasing = ghi > glo;
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let (v, d) = self.curve.eval_with_derivative(x);
            let r = v - u;
            if r == 0.0 {
                return x;
            }
            if (r > 0.0) == increasing {
                hi = x;
            } else {
                lo = x;
            }
            let newton = if d != 0.0 { x - r / d } else { f64::NAN };
            x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (hi - lo).abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        x
    }
}

impl Profile for SampledProfile {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn u0(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            self.curve.eval(x)
        }
    }

    fn u0_prime(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi {
            0.0
        } else {
            self.curve.derivative(x)
        }
    }

    fn f_minus(&self, u: f64) -> f64 {
        self.invert(u, self.lo, self.x_min)
    }

    fn f_plus(&self, u: f64) -> f64 {
        self.invert(u, self.x_min, self.hi)
    }

    fn f_minus_d1(&self, u: f64) -> f64 {
        1.0 / self.curve.derivative(self.f_minus(u))
    }

    fn f_minus_d2(&self, u: f64) -> f64 {
        // f″ = -u₀″/u₀′³
        let x = self.f_minus(u);
        let d1 = self.smooth.derivative(x);
        -self.smooth.higher_derivatives(x).0 / (d1 * d1 * d1)
    }

    fn f_minus_d3(&self, u: f64) -> f64 {
        // f‴ = (3u₀″² - u₀′u₀‴)/u₀′⁵
        let x = self.f_minus(u);
        let d1 = self.smooth.derivative(x);
        let (d2, d3) = self.smooth.higher_derivatives(x);
        (3.0 * d2 * d2 - d1 * d3) / d1.powi(5)
    }

    fn half_width(&self) -> f64 {
        self.lo.abs().min(self.hi.abs())
    }
}

/// Initial data shared by all solvers: the profile plus lazily resolved
/// derived quantities.
#[derive(Clone)]
pub struct InitialDataModel {
    profile: Arc<dyn Profile>,
    hump_time: Arc<OnceLock<Option<f64>>>,
}

impl fmt::Debug for InitialDataModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialDataModel")
            .field("profile", &self.profile.name())
            .field("hump_time", &self.hump_time.get())
            .finish()
    }
}

impl InitialDataModel {
    pub fn new(profile: impl Profile + 'static) -> Self {
        InitialDataModel {
            profile: Arc::new(profile),
            hump_time: Arc::new(OnceLock::new()),
        }
    }

    /// The default u₀ = -sech²x.
    pub fn sech2() -> Self {
        Self::new(Sech2)
    }

    pub fn from_samples(label: &str, xs: &[f64], us: &[f64]) -> Result<Self> {
        Ok(Self::new(SampledProfile::new(label, xs, us)?))
    }

    /// Two-column text file (x, u₀); '#' starts a comment; separators are
    /// whitespace or commas.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InitialData(format!("cannot read {}: {e}", path.display())))?;
        let (mut xs, mut us) = (Vec::new(), Vec::new());
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    detail: format!("{s:?}: {e}"),
                })
            };
            if cols.len() < 2 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    detail: "expected two columns x u0".into(),
                });
            }
            xs.push(parse(cols[0])?);
            us.push(parse(cols[1])?);
        }
        Self::from_samples(&format!("file:{}", path.display()), &xs, &us)
    }

    /// `sech2` or `file:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.trim() {
            "sech2" => Ok(Self::sech2()),
            s if s.starts_with("file:") => Self::from_file(Path::new(&s[5..])),
            other => Err(Error::Config(format!(
                "unknown initial data {other:?} (expected sech2 or file:<path>)"
            ))),
        }
    }

    pub fn name(&self) -> String {
        self.profile.name()
    }

    pub fn profile(&self) -> &dyn Profile {
        self.profile.as_ref()
    }

    pub fn u0(&self, x: f64) -> f64 {
        self.profile.u0(x)
    }

    pub fn u0_prime(&self, x: f64) -> f64 {
        self.profile.u0_prime(x)
    }

    fn check_branch_arg(u: f64, what: &'static str) -> Result<()> {
        if !(-1.0..0.0).contains(&u) {
            return Err(Error::domain(what, u, "[-1, 0)"));
        }
        Ok(())
    }

    pub fn f_minus(&self, u: f64) -> Result<f64> {
        Self::check_branch_arg(u, "f_minus")?;
        if u == -1.0 {
            return Ok(0.0);
        }
        Ok(self.profile.f_minus(u))
    }

    pub fn f_plus(&self, u: f64) -> Result<f64> {
        Self::check_branch_arg(u, "f_plus")?;
        if u == -1.0 {
            return Ok(0.0);
        }
        Ok(self.profile.f_plus(u))
    }

    /// f₋′(u) on the open interval (-1, 0).
    pub fn f_minus_prime(&self, u: f64) -> Result<f64> {
        if !(u > -1.0 && u < 0.0) {
            return Err(Error::domain("f_minus_prime", u, "(-1, 0)"));
        }
        Ok(self.profile.f_minus_d1(u))
    }

    pub fn f_minus_ppp(&self, u: f64) -> Result<f64> {
        if !(u > -1.0 && u < 0.0) {
            return Err(Error::domain("f_minus_ppp", u, "(-1, 0)"));
        }
        Ok(self.profile.f_minus_d3(u))
    }

    /// Hump time if it has been resolved.
    pub fn hump_time(&self) -> Option<Option<f64>> {
        self.hump_time.get().copied()
    }

    /// Resolve the hump time once; later calls return the cached value.
    pub fn hump_time_or_init(&self, resolve: impl FnOnce() -> Option<f64>) -> Option<f64> {
        *self.hump_time.get_or_init(resolve)
    }
}

/// One admissibility check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// (scale, shift) such that u₀(x + shift)/scale is normalised, when the
    /// normalisation check fails.
    pub required_rescaling: Option<(f64, f64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Turn failures into an error listing them.
    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let list: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        Err(Error::InitialData(list.join("; ")))
    }
}

/// Sample the admissibility assumptions: negativity with a single minimum,
/// the normalisation u₀(0) = -1, decay, f₋‴ < 0, and branch consistency.
/// Data are not rescaled; a failed normalisation reports the rescaling
/// that would fix it.
pub fn validate(model: &InitialDataModel) -> ValidationReport {
    let p = model.profile();
    let l = p.half_width();
    let m = 6000;
    let xs: Vec<f64> = (0..=m).map(|i| -l + 2.0 * l * i as f64 / m as f64).collect();
    let us: Vec<f64> = xs.iter().map(|&x| p.u0(x)).collect();
    let mut checks = Vec::new();

    let max_u = us.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check {
        name: "negative",
        passed: max_u <= 1e-14,
        detail: format!("max u0 on [-{l}, {l}] = {max_u:e}"),
    });

    let floor = 1e-10;
    let minima: Vec<usize> = (1..m)
        .filter(|&i| us[i] < -floor && us[i] <= us[i - 1] && us[i] < us[i + 1])
        .collect();
    checks.push(Check {
        name: "single minimum",
        passed: minima.len() == 1,
        detail: format!("{} local minima at x = {:?}", minima.len(), minima.iter().map(|&i| xs[i]).collect::<Vec<_>>()),
    });

    let (i_min, _) = us
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bu), (i, &u)| if u < bu { (i, u) } else { (bi, bu) });
    let x_min = golden_section_min(|x| p.u0(x), xs[i_min.saturating_sub(1)], xs[(i_min + 1).min(m)], 1e-12);
    let u_min = p.u0(x_min);
    let normalised = (u_min + 1.0).abs() < 1e-8 && x_min.abs() < 1e-5;
    checks.push(Check {
        name: "normalisation",
        passed: normalised,
        detail: if normalised {
            "min u0 = -1 at x = 0".into()
        } else {
            format!(
                "min u0 = {u_min} at x = {x_min}; rescale to u0(x + {x_min})/{}",
                u_min.abs()
            )
        },
    });
    let required_rescaling = (!normalised).then_some((u_min.abs(), x_min));

    // ∫|u₀|(1+x²) must converge: the weighted profile has to fall to a
    // negligible fraction of its peak at the edges of the sampled window
    let weight: Vec<f64> = xs.iter().zip(&us).map(|(x, u)| u.abs() * (1.0 + x * x)).collect();
    let peak = weight.iter().cloned().fold(0.0, f64::max);
    let edge = weight[0].max(weight[m]);
    let decays = peak > 0.0 && edge <= 1e-8 * peak;
    checks.push(Check {
        name: "decay",
        passed: decays,
        detail: format!("|u0|(1+x²) at |x| = {l} is {:e} of its peak", edge / peak.max(1e-300)),
    });

    if normalised {
        let worst_d3 = (1..200)
            .map(|i| -1.0 + 0.99 * i as f64 / 200.0 + 0.005)
            .map(|u| p.f_minus_d3(u))
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check {
            name: "f_minus''' negative",
            passed: worst_d3 < 0.0,
            detail: format!("max sampled f₋‴ = {worst_d3:e}"),
        });

        let worst_branch = xs
            .iter()
            .filter(|&&x| x < -1e-2 && x > -0.6 * l)
            .map(|&x| (p.f_minus(p.u0(x)) - x).abs())
            .fold(0.0, f64::max);
        checks.push(Check {
            name: "branch consistency",
            passed: worst_branch < 1e-10,
            detail: format!("max |f₋(u0(x)) - x| = {worst_branch:e}"),
        });
    }

    ValidationReport {
        checks,
        required_rescaling,
    }
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// First gradient catastrophe of the Hopf solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakupPoint {
    pub t_c: f64,
    pub x_c: f64,
    /// Characteristic foot where -u₀′ is maximal.
    pub xi_c: f64,
    pub u_c: f64,
}

/// t_c = 1/max(-6u₀′), located by sampling and golden-section refinement.
pub fn breakup(model: &InitialDataModel) -> Result<BreakupPoint> {
    let p = model.profile();
    let l = p.half_width();
    let m = 4000;
    let slope = |x: f64| -6.0 * p.u0_prime(x);
    let (i_best, best) = (0..=m)
        .map(|i| -l + 2.0 * l * i as f64 / m as f64)
        .map(slope)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    if !(best > 0.0) {
        return Err(Error::NoConvergence {
            what: "breakup maximisation",
            iterations: m,
            residual: best,
        });
    }
    let h = 2.0 * l / m as f64;
    let x0 = -l + i_best as f64 * h;
    let xi_c = golden_section_min(|x| -slope(x), x0 - h, x0 + h, 1e-11);
    // golden section only resolves ξ to ~√eps; polish on the zero of u₀″
    let xi_c = polish_inflection(|x| p.u0_prime(x), xi_c, 1e-6).unwrap_or(xi_c);
    let t_c = 1.0 / slope(xi_c);
    let u_c = p.u0(xi_c);
    Ok(BreakupPoint {
        t_c,
        x_c: 6.0 * t_c * u_c + xi_c,
        xi_c,
        u_c,
    })
}

/// Zero of the derivative of `d1` (by central differences) near `x0` by bisection, if bracketed.
fn polish_inflection(d1: impl Fn(f64) -> f64, x0: f64, half: f64) -> Option<f64> {
    // fourth-order stencil: the O(δ²) bias of the plain difference shifts the zero by ~1e-8
    let delta = 1e-3;
    let s = |x: f64| 8.0 * (d1(x + delta) - d1(x - delta)) - (d1(x + 2.0 * delta) - d1(x - 2.0 * delta));
    let (mut lo, mut hi) = (x0 - half, x0 + half);
    let slo = s(lo);
    if slo * s(hi) > 0.0 {
        return None;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (s(mid) > 0.0) == (slo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// One branch of the characteristic solution at (x, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfBranch {
    /// Characteristic foot ξ with x = 6t u₀(ξ) + ξ.
    pub xi: f64,
    pub u: f64,
    /// u_x = u₀′(ξ)/(1 + 6t u₀′(ξ)).
    pub u_x: f64,
    /// |1 + 6t u₀′(ξ)| below 1e-5: the gradient is (numerically) infinite.
    pub gradient_blowup: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HopfSolution {
    Single(HopfBranch),
    /// All branches, ordered by ξ.
    Multivalued(Vec<HopfBranch>),
}

impl HopfSolution {
    /// Value of the single-valued solution, or an error in the fold.
    pub fn single(&self) -> Option<HopfBranch> {
        match self {
            HopfSolution::Single(b) => Some(*b),
            HopfSolution::Multivalued(_) => None,
        }
    }

    pub fn branches(&self) -> Vec<HopfBranch> {
        match self {
            HopfSolution::Single(b) => vec![*b],
            HopfSolution::Multivalued(v) => v.clone(),
        }
    }
}

/// Solve x = 6t u₀(ξ) + ξ. Every root lies in [x, x + 6t] because
/// u₀ ∈ [-1, 0]; the bracket is sampled, sign changes (and tangential
/// touches) are refined by safeguarded Newton.
pub fn hopf_solve(model: &InitialDataModel, x: f64, t: f64) -> Result<HopfSolution> {
    if !(t >= 0.0) {
        return Err(Error::domain("hopf_solve time", t, "[0, inf)"));
    }
    let p = model.profile();
    let branch = |xi: f64| {
        let d = p.u0_prime(xi);
        let denom = 1.0 + 6.0 * t * d;
        HopfBranch {
            xi,
            u: p.u0(xi),
            u_x: d / denom,
            gradient_blowup: denom.abs() < 1e-5,
        }
    };
    if t == 0.0 {
        return Ok(HopfSolution::Single(branch(x)));
    }
    let g = |xi: f64| 6.0 * t * p.u0(xi) + xi - x;
    let dg = |xi: f64| 1.0 + 6.0 * t * p.u0_prime(xi);
    let (a, b) = (x, x + 6.0 * t);
    let m = 256;
    let grid: Vec<f64> = (0..=m).map(|i| a + (b - a) * i as f64 / m as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&xi| g(xi)).collect();

    let mut roots = Vec::new();
    for i in 0..m {
        let (l, r, gl, gr) = (grid[i], grid[i + 1], vals[i], vals[i + 1]);
        if gl == 0.0 {
            roots.push(l);
        } else if gl * gr < 0.0 {
            roots.push(refine_root(&g, &dg, l, r));
        } else if dg(l) * dg(r) < 0.0 {
            // g turns inside the cell: look for a pair of roots around the extremum
            let xe = if dg(l) < 0.0 {
                golden_section_min(&g, l, r, 1e-14)
            } else {
                golden_section_min(|xi| -g(xi), l, r, 1e-14)
            };
            let ge = g(xe);
            if ge == 0.0 || ge.abs() < 1e-13 {
                roots.push(xe);
            } else if ge * gl < 0.0 {
                roots.push(refine_root(&g, &dg, l, xe));
                roots.push(refine_root(&g, &dg, xe, r));
            }
        }
    }
    if vals[m] == 0.0 {
        roots.push(b);
    }
    roots.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    match roots.len() {
        0 => Err(Error::Bracket {
            what: "hopf characteristic foot",
            lo: a,
            hi: b,
        }),
        1 => Ok(HopfSolution::Single(branch(roots[0]))),
        _ => Ok(HopfSolution::Multivalued(roots.into_iter().map(branch).collect())),
    }
}

fn refine_root(g: &impl Fn(f64) -> f64, dg: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if (gx > 0.0) == (glo > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let d = dg(x);
        let newton = x - gx / d;
        x = if d != 0.0 && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() < 1e-15 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}
