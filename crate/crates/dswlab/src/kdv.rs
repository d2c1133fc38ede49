//! Reference solver for u_t + 6uu_x + ε²u_xxx = 0 on the periodic box [-L, L).
//!
//! Fourier pseudospectral in space. In time, fourth-order exponential time
//! differencing (ETDRK4): the dispersive term iε²k³ is integrated exactly and
//! the φ-function coefficients are evaluated as means over a small circle in
//! the complex plane, which avoids the cancellation in their Taylor-free
//! formulas for small dt·ε²k³.

use crate::error::{Error, Result};
use crate::initial_data::InitialDataModel;
use crate::output::{fmt_num, header_value, read_table, Table};
use realfft::num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

/// Uniform periodic grid x_j = -L + j·dx, j = 0..N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_width: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Config(format!("grid half-width must be positive, got {half_width}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Config(format!("grid size must be a power of two ≥ 16, got {n}")));
        }
        Ok(Grid1D { half_width, n })
    }

    /// Smallest power-of-two grid on [-L, L) with dx ≤ ε/10.
    pub fn resolving(half_width: f64, epsilon: f64) -> Result<Self> {
        let need = (2.0 * half_width / (epsilon / 10.0)).ceil() as usize;
        Self::new(half_width, need.next_power_of_two().max(16))
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Index of the grid point nearest to x (clamped to the box).
    pub fn nearest(&self, x: f64) -> usize {
        let j = ((x + self.half_width) / self.dx()).round();
        j.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Wavenumbers of the half spectrum, k_j = πj/L for j = 0..=N/2.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..=self.n / 2).map(|j| PI * j as f64 / self.half_width).collect()
    }
}

/// A field sampled on a grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub time: f64,
    pub epsilon: f64,
}

impl GridFunction {
    pub fn sample(grid: Grid1D, time: f64, epsilon: f64, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            values: grid.xs().into_iter().map(f).collect(),
            grid,
            time,
            epsilon,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value at x by linear interpolation between grid points (periodic).
    pub fn interpolate(&self, x: f64) -> f64 {
        let g = &self.grid;
        let s = (x + g.half_width) / g.dx();
        let j = s.floor();
        let w = s - j;
        let n = g.n as i64;
        let j0 = (j as i64).rem_euclid(n) as usize;
        let j1 = (j0 + 1) % g.n;
        (1.0 - w) * self.values[j0] + w * self.values[j1]
    }

    /// Largest Fourier coefficient in the top tenth of the spectrum relative
    /// to the largest coefficient overall.
    pub fn spectral_tail(&self) -> f64 {
        let mut planner = RealFftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(self.grid.n);
        let mut input = self.values.clone();
        let mut spec = fft.make_output_vec();
        fft.process(&mut input, &mut spec).expect("fft length");
        tail_ratio(&spec)
    }

    /// max_j |u_j - w_j| over the points shared by two grids on the same box
    /// whose sizes differ by a power of two.
    pub fn max_difference(&self, other: &GridFunction) -> Result<f64> {
        if (self.grid.half_width - other.grid.half_width).abs() > 1e-12 * self.grid.half_width {
            return Err(Error::Config("grids cover different boxes".into()));
        }
        let (fine, coarse) = if self.grid.n >= other.grid.n { (self, other) } else { (other, self) };
        let ratio = fine.grid.n / coarse.grid.n;
        if ratio * coarse.grid.n != fine.grid.n {
            return Err(Error::Config("grid sizes are not nested".into()));
        }
        Ok((0..coarse.grid.n)
            .map(|j| (fine.values[j * ratio] - coarse.values[j]).abs())
            .fold(0.0, f64::max))
    }

    /// (x, u) table with the grid and time in the header.
    pub fn to_table(&self, title: &str) -> Table {
        let mut t = Table::new(&["x", "u"]);
        t.comment(title)
            .meta("L", fmt_num(self.grid.half_width))
            .meta("N", self.grid.n)
            .meta("t", fmt_num(self.time))
            .meta("epsilon", fmt_num(self.epsilon));
        for (j, &u) in self.values.iter().enumerate() {
            t.push(vec![self.grid.x(j), u]);
        }
        t
    }

    /// Checkpoint: header (L, N, t, ε) and (x, u) rows, 17 significant digits.
    pub fn write_checkpoint(&self, path: &Path) -> Result<()> {
        self.to_table("dswlab kdv checkpoint").write(path)
    }

    pub fn read_checkpoint(path: &Path) -> Result<Self> {
        let (header, rows) = read_table(path)?;
        let bad = |detail: String| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            detail,
        };
        let num = |key: &str| -> Result<f64> {
            header_value(&header, key)
                .ok_or_else(|| bad(format!("missing header field {key}")))?
                .parse::<f64>()
                .map_err(|e| bad(format!("header field {key}: {e}")))
        };
        let n = num("N")? as usize;
        let grid = Grid1D::new(num("L")?, n)?;
        if rows.len() != n || rows.iter().any(|r| r.len() < 2) {
            return Err(bad(format!("expected {n} rows of (x, u), found {}", rows.len())));
        }
        Ok(GridFunction {
            grid,
            values: rows.iter().map(|r| r[1]).collect(),
            time: num("t")?,
            epsilon: num("epsilon")?,
        })
    }
}

fn tail_ratio(spec: &[Complex64]) -> f64 {
    let top = spec.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let start = (spec.len() * 9) / 10;
    let tail = spec[start..].iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if top == 0.0 {
        0.0
    } else {
        tail / top
    }
}

/// Solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct KdvOptions {
    /// Time step; default 5·10⁻⁶·ε/10⁻².
    pub dt: Option<f64>,
    /// 2/3-rule dealiasing of the nonlinear term.
    pub dealias: bool,
    /// Points on the contour for the φ-functions.
    pub contour_points: usize,
    /// max |u| beyond which the run is declared blown up.
    pub blowup: f64,
    /// Spectral-tail gate applied to the final snapshot; `None` disables it.
    pub tail_gate: Option<f64>,
    /// Steps between blow-up checks.
    pub check_every: usize,
}

impl Default for KdvOptions {
    fn default() -> Self {
        KdvOptions {
            dt: None,
            dealias: false,
            contour_points: 32,
            blowup: 10.0,
            tail_gate: Some(1e-8),
            check_every: 100,
        }
    }
}

pub fn default_dt(epsilon: f64) -> f64 {
    5e-6 * epsilon / 0.01
}

/// Snapshots at the requested times plus run diagnostics.
#[derive(Debug, Clone)]
pub struct KdvRun {
    pub snapshots: Vec<GridFunction>,
    pub steps: usize,
    /// Spectral-tail ratio of each snapshot.
    pub tail_ratios: Vec<f64>,
}

impl KdvRun {
    pub fn last(&self) -> &GridFunction {
        &self.snapshots[self.snapshots.len() - 1]
    }
}

/// ETDRK4 coefficients for one step size.
struct Coefficients {
    dt: f64,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl Coefficients {
    fn new(lin: &[Complex64], dt: f64, m: usize) -> Self {
        let roots: Vec<Complex64> = (1..=m)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 - 0.5) / m as f64))
            .collect();
        let n = lin.len();
        let mut c = Coefficients {
            dt,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        let one = Complex64::new(1.0, 0.0);
        for &l in lin {
            let z = l * dt;
            c.e.push(z.exp());
            c.e2.push((z * 0.5).exp());
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
            for &r in &roots {
                let w = z + r;
                let ew = w.exp();
                let w3 = w * w * w;
                q += ((w * 0.5).exp() - one) / w;
                f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w * w)) / w3;
                f2 += (2.0 + w + ew * (w - 2.0)) / w3;
                f3 += (-4.0 - 3.0 * w - w * w + ew * (4.0 - w)) / w3;
            }
            let s = dt / m as f64;
            c.q.push(q * s);
            c.f1.push(f1 * s);
            c.f2.push(f2 * s);
            c.f3.push(f3 * s);
        }
        c
    }
}

/// Pseudospectral KdV stepper on a fixed grid.
struct Stepper {
    n: usize,
    lin: Vec<Complex64>,
    /// -3ik with the Nyquist mode (and the 2/3-rule band, if requested) removed.
    nonlin: Vec<Complex64>,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    real: Vec<f64>,
    cplx: Vec<Complex64>,
    scratch_r2c: Vec<Complex64>,
    scratch_c2r: Vec<Complex64>,
}

impl Stepper {
    fn new(grid: Grid1D, epsilon: f64, dealias: bool) -> Self {
        let n = grid.n;
        let mut ks = grid.wavenumbers();
        // odd derivatives: the Nyquist mode has no real representative
        ks[n / 2] = 0.0;
        let kmax = PI * (n / 2) as f64 / grid.half_width;
        let lin = ks.iter().map(|&k| Complex64::new(0.0, epsilon * epsilon * k * k * k)).collect();
        let nonlin = ks
            .iter()
            .map(|&k| {
                if dealias && k > 2.0 * kmax / 3.0 {
                    Complex64::default()
                } else {
                    Complex64::new(0.0, -3.0 * k)
                }
            })
            .collect();
        let mut planner = RealFftPlanner::<f64>::new();
        let r2c = planner.plan_fft_forward(n);
        let c2r = planner.plan_fft_inverse(n);
        Stepper {
            n,
            lin,
            nonlin,
            real: r2c.make_input_vec(),
            cplx: r2c.make_output_vec(),
            scratch_r2c: r2c.make_scratch_vec(),
            scratch_c2r: c2r.make_scratch_vec(),
            r2c,
            c2r,
        }
    }

    fn forward(&mut self, u: &[f64]) -> Vec<Complex64> {
        self.real.copy_from_slice(u);
        let mut out = self.r2c.make_output_vec();
        self.r2c
            .process_with_scratch(&mut self.real, &mut out, &mut self.scratch_r2c)
            .expect("fft length");
        out
    }

    /// u = F⁻¹v into `self.real`.
    fn inverse(&mut self, v: &[Complex64]) {
        self.cplx.copy_from_slice(v);
        self.cplx[0].im = 0.0;
        self.cplx[self.n / 2].im = 0.0;
        self.c2r
            .process_with_scratch(&mut self.cplx, &mut self.real, &mut self.scratch_c2r)
            .expect("fft length");
        let s = 1.0 / self.n as f64;
        for x in &mut self.real {
            *x *= s;
        }
    }

    /// N(v) = -3ik·F(u²).
    fn nonlinear(&mut self, v: &[Complex64], out: &mut [Complex64]) {
        self.inverse(v);
        for x in &mut self.real {
            *x *= *x;
        }
        self.r2c
            .process_with_scratch(&mut self.real, out, &mut self.scratch_r2c)
            .expect("fft length");
        for (o, g) in out.iter_mut().zip(&self.nonlin) {
            *o *= g;
        }
    }

    fn step(&mut self, c: &Coefficients, v: &mut [Complex64], work: &mut Work) {
        let m = v.len();
        self.nonlinear(v, &mut work.nv);
        for i in 0..m {
            work.a[i] = c.e2[i] * v[i] + c.q[i] * work.nv[i];
        }
        let a = std::mem::take(&mut work.a);
        self.nonlinear(&a, &mut work.na);
        work.a = a;
        for i in 0..m {
            work.b[i] = c.e2[i] * v[i] + c.q[i] * work.na[i];
        }
        let b = std::mem::take(&mut work.b);
        self.nonlinear(&b, &mut work.nb);
        work.b = b;
        for i in 0..m {
            work.c[i] = c.e2[i] * work.a[i] + c.q[i] * (2.0 * work.nb[i] - work.nv[i]);
        }
        let cc = std::mem::take(&mut work.c);
        self.nonlinear(&cc, &mut work.nc);
        work.c = cc;
        for i in 0..m {
            v[i] = c.e[i] * v[i]
                + work.nv[i] * c.f1[i]
                + 2.0 * (work.na[i] + work.nb[i]) * c.f2[i]
                + work.nc[i] * c.f3[i];
        }
    }
}

struct Work {
    nv: Vec<Complex64>,
    na: Vec<Complex64>,
    nb: Vec<Complex64>,
    nc: Vec<Complex64>,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
}

impl Work {
    fn new(m: usize) -> Self {
        let z = vec![Complex64::default(); m];
        Work {
            nv: z.clone(),
            na: z.clone(),
            nb: z.clone(),
            nc: z.clone(),
            a: z.clone(),
            b: z.clone(),
            c: z,
        }
    }
}

/// Explicit-stage stability bound used for the step-size check: the
/// advective part dt·6 max|u|·k_max must stay inside the RK4 region.
const ADVECTIVE_LIMIT: f64 = 2.5;

/// Solve from u₀ to each of `times` (non-decreasing, ≥ 0).
pub fn kdv_solve(model: &InitialDataModel, epsilon: f64, grid: Grid1D, times: &[f64], opts: &KdvOptions) -> Result<KdvRun> {
    if !(5e-3..=0.5).contains(&epsilon) {
        return Err(Error::domain("kdv epsilon", epsilon, "[5e-3, 0.5]"));
    }
    let l = grid.half_width;
    let edge = model.u0(-l).abs().max(model.u0(l).abs());
    if edge >= 1e-12 {
        return Err(Error::Config(format!(
            "box half-width {l} too small: |u0| = {edge:e} at the boundary (needs < 1e-12)"
        )));
    }
    if times.is_empty() || times.iter().any(|&t| !(t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("output times must be non-negative and non-decreasing".into()));
    }
    let dt_req = opts.dt.unwrap_or_else(|| default_dt(epsilon));
    if !(dt_req > 0.0) {
        return Err(Error::Config(format!("time step must be positive, got {dt_req}")));
    }
    let u0 = GridFunction::sample(grid, 0.0, epsilon, |x| model.u0(x));
    let kmax = PI * (grid.n / 2) as f64 / l;
    let cfl = dt_req * 6.0 * u0.max_abs().max(1.0) * kmax;
    if cfl > ADVECTIVE_LIMIT {
        return Err(Error::Kdv {
            time: 0.0,
            detail: format!("time step {dt_req:e} too large for the grid (dt·6max|u|·k_max = {cfl:.3} > {ADVECTIVE_LIMIT})"),
        });
    }

    let mut st = Stepper::new(grid, epsilon, opts.dealias);
    let mut v = st.forward(&u0.values);
    let mut work = Work::new(v.len());
    let mut coeffs: Option<Coefficients> = None;
    let mut t = 0.0;
    let mut steps = 0usize;
    let mut snapshots = Vec::with_capacity(times.len());
    let mut tails = Vec::with_capacity(times.len());

    for &target in times {
        let span = target - t;
        let nseg = if span <= 0.0 { 0 } else { ((span / dt_req) - 1e-9).ceil().max(1.0) as usize };
        if nseg > 0 {
            let dt = span / nseg as f64;
            if coeffs.as_ref().map_or(true, |c| (c.dt - dt).abs() > 1e-14 * dt) {
                coeffs = Some(Coefficients::new(&st.lin, dt, opts.contour_points));
            }
            let c = coeffs.as_ref().expect("coefficients");
            for k in 0..nseg {
                st.step(c, &mut v, &mut work);
                steps += 1;
                if (k + 1) % opts.check_every.max(1) == 0 || k + 1 == nseg {
                    st.inverse(&v);
                    let m = st.real.iter().fold(0.0f64, |m, x| if x.is_finite() { m.max(x.abs()) } else { f64::INFINITY });
                    if m > opts.blowup {
                        return Err(Error::Kdv {
                            time: t + (k + 1) as f64 * dt,
                            detail: format!("blow-up: max |u| = {m:e} exceeds {}", opts.blowup),
                        });
                    }
                }
            }
            t = target;
        }
        let snap = if steps == 0 {
            GridFunction { time: target, ..u0.clone() }
        } else {
            st.inverse(&v);
            GridFunction {
                grid,
                values: st.real.clone(),
                time: target,
                epsilon,
            }
        };
        tails.push(tail_ratio(&v));
        snapshots.push(snap);
    }

    if let Some(gate) = opts.tail_gate {
        let tail = tails[tails.len() - 1];
        if tail > gate {
            return Err(Error::Kdv {
                time: t,
                detail: format!("under-resolved: spectral tail {tail:e} exceeds {gate:e} (increase N)"),
            });
        }
    }
    Ok(KdvRun {
        snapshots,
        steps,
        tail_ratios: tails,
    })
}

/// Mass ∫u dx and momentum ∫u² dx of one snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved {
    pub time: f64,
    pub mass: f64,
    pub momentum: f64,
}

/// Trapezoid sums (exact for trigonometric polynomials) on the periodic grid.
pub fn conserved(traj: &[GridFunction]) -> Vec<Conserved> {
    traj.iter()
        .map(|g| {
            let dx = g.grid.dx();
            Conserved {
                time: g.time,
                mass: dx * g.values.iter().sum::<f64>(),
                momentum: dx * g.values.iter().map(|u| u * u).sum::<f64>(),
            }
        })
        .collect()
}
