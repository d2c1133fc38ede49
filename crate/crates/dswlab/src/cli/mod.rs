//! Command-line front end: single-stage subcommands (`hm`, `kdv`, `edges`,
//! `whitham`, `asym`, `compare`) and preset pipelines (`run`).
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver failure,
//! 4 failed acceptance check in a `run --check`.

pub mod config;
pub mod pipeline;
pub mod plot;

use crate::asymptotics::{Asymptotics, MultiscaleOrder};
use crate::compare::{compare_snapshot, EdgeWindow, ZoneBounds};
use crate::error::{Error, Result};
use crate::initial_data::{breakup, InitialDataModel};
use crate::kdv::{kdv_solve, GridFunction, KdvOptions};
use crate::output::Table;
use crate::painleve2::{self, HmConfig};
use crate::whitham::{trailing_edge_path, EdgeTrajectory, WhithamZone};
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{read_config, Assignment, ExperimentConfig, Preset};
use pipeline::Target;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_CHECK: u8 = 4;

/// Environment variable that overrides the output directory.
pub const OUTDIR_ENV: &str = "DSWLAB_OUTDIR";

#[derive(Debug, Parser)]
#[command(name = "dswlab", version, about = "Small-dispersion KdV laboratory")]
pub struct Cli {
    /// Initial data: `sech2` or `file:<path>` with (x, u0) rows.
    #[arg(long, global = true, default_value = "sech2")]
    pub initial_data: String,
    /// Also write a gnuplot script next to every output file.
    #[arg(long, global = true)]
    pub gnuplot: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hastings–McLeod solution of Painlevé-II.
    Hm {
        #[command(subcommand)]
        action: HmAction,
    },
    /// Reference KdV solver.
    Kdv {
        #[command(subcommand)]
        action: KdvAction,
    },
    /// Leading- and trailing-edge trajectories.
    Edges(EdgesArgs),
    /// Whitham solution across the oscillation zone.
    Whitham {
        #[command(subcommand)]
        action: WhithamAction,
    },
    /// Asymptotic solutions on a uniform grid.
    Asym(AsymArgs),
    /// Error measurements against KdV.
    Compare {
        #[command(subcommand)]
        action: CompareAction,
    },
    /// Run a preset pipeline with a manifest.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct HmArgs {
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub zl: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub zr: f64,
    /// Chebyshev degree.
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Relaxation parameter of the fixed-point iteration.
    #[arg(long, default_value_t = 0.009)]
    pub mu: f64,
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    /// Output grid size on [zl, zr].
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum HmAction {
    /// Rows (z, A(z)).
    Solve(HmArgs),
    /// Rows (z, A'' - zA - 2A³).
    Residual(HmArgs),
}

#[derive(Debug, Subcommand)]
pub enum KdvAction {
    /// Snapshot at time t in the checkpoint format.
    Run {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        t: f64,
        /// Half-width of the periodic box.
        #[arg(long = "L", default_value_t = 15.0)]
        half_width: f64,
        /// Grid points (power of two); default resolves ε.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        /// 2/3-rule dealiasing of the nonlinear term.
        #[arg(long)]
        dealias: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct EdgesArgs {
    #[arg(long, default_value_t = 0.22)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.4)]
    pub t1: f64,
    /// Number of intervals between t0 and t1.
    #[arg(long, default_value_t = 90)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum WhithamAction {
    /// Rows (x, β₁, β₂, β₃) from x⁻ to x⁺.
    Solve {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymKind {
    /// Elliptic solution inside the zone, Hopf outside.
    Elliptic,
    /// Small-amplitude limit near the leading edge.
    Smallamp,
    /// Multiscale solution with the Painlevé-II envelope.
    Multiscale,
    /// Hopf / multiscale / elliptic patched at the better-zone bounds.
    Composite,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    pub kind: AsymKind,
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
    /// Multiscale zone `left,right` for `composite`; without it (or
    /// --snapshot) a KdV run locates the zone.
    #[arg(long, allow_hyphen_values = true)]
    pub zone: Option<String>,
    /// KdV checkpoint used to locate the zone for `composite`.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Include the ε^{2/3} terms of the multiscale solution.
    #[arg(long)]
    pub second_order: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CompareAction {
    /// Per-ε errors and a log-log fit.
    Scaling {
        /// Comma-separated ε values (at least three).
        #[arg(long)]
        epsilons: String,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum)]
        target: Target,
        /// Edge window half-width in Painlevé units.
        #[arg(long, default_value_t = 0.5)]
        window: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Where the multiscale solution beats elliptic/Hopf.
    Zone {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Config file of `key = value` lines (a manifest works too).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Override one config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub epsilons: Option<String>,
    #[arg(long)]
    pub times: Option<String>,
    #[arg(long)]
    pub outdir: Option<PathBuf>,
    /// Evaluate the preset's acceptance checks; exit 4 if any fails.
    #[arg(long)]
    pub check: bool,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::InitialData(_) => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

/// Entry point of the `dswlab` binary.
pub fn main() -> ExitCode {
    ExitCode::from(run_cli(std::env::args_os()))
}

/// Parse and execute; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dswlab: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8> {
    let model = || InitialDataModel::from_spec(&cli.initial_data);
    let g = cli.gnuplot;
    match &cli.command {
        Command::Hm { action } => {
            let (a, residual) = match action {
                HmAction::Solve(a) => (a, false),
                HmAction::Residual(a) => (a, true),
            };
            hm(a, residual, g)?;
        }
        Command::Kdv {
            action:
                KdvAction::Run {
                    epsilon,
                    t,
                    half_width,
                    n,
                    dt,
                    dealias,
                    out,
                },
        } => {
            let grid = pipeline::grid_for(*half_width, *n, *epsilon)?;
            let opts = KdvOptions {
                dt: *dt,
                dealias: *dealias,
                ..KdvOptions::default()
            };
            let run = kdv_solve(&model()?, *epsilon, grid, &[*t], &opts)?;
            let mut table = run.last().to_table("KdV snapshot");
            table.meta("initial_data", &cli.initial_data).meta("steps", run.steps);
            emit(&table, out.as_deref(), g, "x", "u")?;
        }
        Command::Edges(a) => edges(&model()?, a, g)?,
        Command::Whitham {
            action: WhithamAction::Solve { t, out },
        } => {
            let zone = WhithamZone::build(&model()?, *t)?;
            let mut table = Table::new(&["x", "beta1", "beta2", "beta3"]);
            table.meta("t", t).meta("x_minus", zone.x_minus()).meta("x_plus", zone.x_plus());
            for n in zone.nodes() {
                table.push(vec![n.x, n.beta1, n.beta2, n.beta3]);
            }
            emit(&table, out.as_deref(), g, "x", "beta")?;
        }
        Command::Asym(a) => asym(&model()?, a, g)?,
        Command::Compare { action } => compare(&model()?, action, g)?,
        Command::Run(a) => return run(cli, a),
    }
    Ok(0)
}

/// Resolve an output path: relative paths go under $DSWLAB_OUTDIR if set.
pub fn output_path(out: &Path) -> PathBuf {
    match std::env::var_os(OUTDIR_ENV) {
        Some(dir) if out.is_relative() => Path::new(&dir).join(out),
        _ => out.to_path_buf(),
    }
}

/// Write to --out (plus a gnuplot script when asked) or print to stdout.
fn emit(table: &Table, out: Option<&Path>, gnuplot: bool, xlabel: &str, ylabel: &str) -> Result<()> {
    emit_text(&table.render(), out, gnuplot, xlabel, ylabel, None)
}

fn emit_text(text: &str, out: Option<&Path>, gnuplot: bool, xlabel: &str, ylabel: &str, index: Option<usize>) -> Result<()> {
    let Some(out) = out else {
        print!("{text}");
        return Ok(());
    };
    let path = output_path(out);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&path, text)?;
    if gnuplot {
        let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let stem = path.file_stem().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let mut series = plot::Series::new(&file, "1:2", &stem);
        let mut p = plot::Plot::new(&stem, xlabel, ylabel);
        if let Some(i) = index {
            series = series.index(i);
            p = p.loglog();
        }
        std::fs::write(path.with_extension("gp"), p.series(series).script())?;
    }
    Ok(())
}

fn hm(a: &HmArgs, residual: bool, gnuplot: bool) -> Result<()> {
    if a.points < 2 {
        return Err(Error::Config("--points must be at least 2".into()));
    }
    let cfg = HmConfig {
        z_left: a.zl,
        z_right: a.zr,
        degree: a.n,
        relaxation: a.mu,
        tolerance: a.tol,
        ..HmConfig::default()
    };
    if !(a.zl < a.zr) || !(a.mu > 0.0) || !(a.tol > 0.0) || a.n < 4 {
        return Err(Error::Config("need zl < zr, mu > 0, tol > 0 and n ≥ 4".into()));
    }
    let sol = painleve2::solve(&cfg)?;
    let col = if residual { "residual" } else { "A" };
    let mut table = Table::new(&["z", col]);
    table
        .meta("z_left", a.zl)
        .meta("z_right", a.zr)
        .meta("degree", a.n)
        .meta("mu", a.mu)
        .meta("max_collocation_residual", crate::output::fmt_num(sol.max_collocation_residual()));
    for k in 0..a.points {
        let z = a.zl + (a.zr - a.zl) * k as f64 / (a.points - 1) as f64;
        table.push(vec![z, if residual { sol.residual(z) } else { sol.eval(z) }]);
    }
    emit(&table, a.out.as_deref(), gnuplot, "z", col)
}

fn edges(model: &InitialDataModel, a: &EdgesArgs, gnuplot: bool) -> Result<()> {
    let b = breakup(model)?;
    if !(a.t0 > b.t_c && a.t1 > a.t0) || a.steps == 0 {
        return Err(Error::Config(format!("need t_c = {:.6} < t0 < t1 and steps ≥ 1", b.t_c)));
    }
    let ts: Vec<f64> = (0..=a.steps).map(|k| a.t0 + (a.t1 - a.t0) * k as f64 / a.steps as f64).collect();
    let traj = EdgeTrajectory::build(model, a.t1, 1000)?;
    let trailing = trailing_edge_path(model, &ts)?;
    let mut table = Table::new(&["t", "x_minus", "x_plus", "u", "v", "u_t", "v_t", "c", "phi0"]);
    table.meta("t_c", b.t_c).meta("x_c", b.x_c);
    for (t, tr) in ts.iter().zip(&trailing) {
        let e = traj.state_at(*t)?;
        table.push(vec![*t, e.x_minus, tr.x, e.u, e.v, e.u_t, e.v_t, e.c, e.phi0]);
    }
    emit(&table, a.out.as_deref(), gnuplot, "t", "x")
}

fn parse_zone(s: &str, t: f64, epsilon: f64) -> Result<ZoneBounds> {
    let v = config::parse_list(s).map_err(Error::Config)?;
    match v[..] {
        [left, right] if left < right => Ok(ZoneBounds {
            left,
            right,
            t,
            epsilon,
            left_closed: true,
            right_closed: true,
        }),
        _ => Err(Error::Config(format!("--zone expects left,right with left < right, got {s:?}"))),
    }
}

fn snapshot_for(model: &InitialDataModel, epsilon: f64, t: f64) -> Result<GridFunction> {
    let grid = pipeline::grid_for(15.0, None, epsilon)?;
    Ok(kdv_solve(model, epsilon, grid, &[t], &KdvOptions::default())?.last().clone())
}

fn asym(model: &InitialDataModel, a: &AsymArgs, gnuplot: bool) -> Result<()> {
    if !(a.xmin < a.xmax) || a.points < 2 {
        return Err(Error::Config("need xmin < xmax and points ≥ 2".into()));
    }
    let asym = Asymptotics::new(model, a.t)?;
    let eps = a.epsilon;
    let order = if a.second_order {
        MultiscaleOrder::TwoThirds
    } else {
        MultiscaleOrder::OneThird
    };
    let mut table = Table::new(&["x", "u_asym"]);
    table
        .meta("kind", format!("{:?}", a.kind).to_lowercase())
        .meta("t", a.t)
        .meta("epsilon", eps)
        .meta("x_minus", asym.zone().x_minus())
        .meta("x_plus", asym.zone().x_plus());
    let zone = match a.kind {
        AsymKind::Composite => {
            let z = match (&a.zone, &a.snapshot) {
                (Some(s), _) => parse_zone(s, a.t, eps)?,
                (None, Some(p)) => {
                    let u = GridFunction::read_checkpoint(p)?;
                    if (u.time - a.t).abs() > 1e-12 || (u.epsilon - eps).abs() > 1e-15 {
                        return Err(Error::Config(format!("snapshot is at t = {}, ε = {}", u.time, u.epsilon)));
                    }
                    pipeline::zone_for(&u, &asym)?
                }
                (None, None) => pipeline::zone_for(&snapshot_for(model, eps, a.t)?, &asym)?,
            };
            table.meta("zone_left", z.left).meta("zone_right", z.right);
            Some(z)
        }
        _ => None,
    };
    for k in 0..a.points {
        let x = a.xmin + (a.xmax - a.xmin) * k as f64 / (a.points - 1) as f64;
        let u = match a.kind {
            AsymKind::Elliptic => asym.elliptic_hopf(x, eps)?,
            AsymKind::Smallamp => {
                if x < asym.zone().x_minus() {
                    asym.hopf(x)?
                } else {
                    asym.small_amplitude(x, eps)?
                }
            }
            AsymKind::Multiscale => asym.multiscale(x, eps, order),
            AsymKind::Composite => asym.composite(x, eps, zone.as_ref().expect("zone resolved above"))?,
        };
        table.push(vec![x, u]);
    }
    emit(&table, a.out.as_deref(), gnuplot, "x", "u")
}

fn compare(model: &InitialDataModel, action: &CompareAction, gnuplot: bool) -> Result<()> {
    match action {
        CompareAction::Scaling {
            epsilons,
            t,
            target,
            window,
            out,
        } => {
            let eps = config::parse_list(epsilons).map_err(Error::Config)?;
            if eps.len() < 3 || eps.iter().any(|e| !(*e > 0.0)) {
                return Err(Error::Config("--epsilons needs at least three positive values".into()));
            }
            if !(*window > 0.0) {
                return Err(Error::Config("--window must be positive".into()));
            }
            let asym = Asymptotics::new(model, *t)?;
            let mut values = Vec::new();
            for &e in &eps {
                let u = snapshot_for(model, e, *t)?;
                let c = compare_snapshot(&u, &asym, EdgeWindow { z_half_width: *window })?;
                values.push(target.of(&c));
            }
            let (text, _) = pipeline::scaling_text(*target, *t, &eps, &values)?;
            emit_text(&text, out.as_deref(), gnuplot, "epsilon", target.name(), Some(0))
        }
        CompareAction::Zone { epsilon, t, out } => {
            let asym = Asymptotics::new(model, *t)?;
            let u = snapshot_for(model, *epsilon, *t)?;
            let z = pipeline::zone_for(&u, &asym)?;
            let mut table = pipeline::zone_table(&[z], asym.zone().x_minus());
            table.meta("x_minus", asym.zone().x_minus());
            emit(&table, out.as_deref(), gnuplot, "t", "x")
        }
    }
}

/// Output directory of a run: --outdir, then $DSWLAB_OUTDIR, then the
/// config's `outdir`, then `dswlab-out/<preset>`.
pub fn run_outdir(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(OUTDIR_ENV) {
        return PathBuf::from(dir);
    }
    cfg.outdir.clone().unwrap_or_else(|| Path::new("dswlab-out").join(cfg.preset.name()))
}

/// Collect assignments: config file, then --preset, --initial-data (when
/// not the default), --epsilons, --times and every --set, in that order.
pub fn run_assignments(cli: &Cli, a: &RunArgs) -> Result<Vec<Assignment>> {
    let mut items = match &a.config {
        Some(p) => read_config(p)?,
        None => Vec::new(),
    };
    let flag = |key: &str, value: String, origin: &str| Assignment {
        key: key.into(),
        value,
        origin: origin.into(),
    };
    if let Some(p) = a.preset {
        items.push(flag("preset", p.name().into(), "--preset"));
    }
    if cli.initial_data != "sech2" {
        items.push(flag("initial_data", cli.initial_data.clone(), "--initial-data"));
    }
    if let Some(e) = &a.epsilons {
        items.push(flag("epsilons", e.clone(), "--epsilons"));
    }
    if let Some(t) = &a.times {
        items.push(flag("times", t.clone(), "--times"));
    }
    for s in &a.set {
        items.push(Assignment::from_flag(s)?);
    }
    Ok(items)
}

fn run(cli: &Cli, a: &RunArgs) -> Result<u8> {
    let cfg = ExperimentConfig::from_assignments(&run_assignments(cli, a)?)?;
    let outdir = run_outdir(a.outdir.as_deref(), &cfg);
    let report = pipeline::run(&cfg, &outdir, cli.gnuplot)?;
    println!("# preset = {}", cfg.preset);
    println!("# outdir = {}", outdir.display());
    for o in &report.outputs {
        println!("# output = {o}");
    }
    println!("# wall_time_seconds = {:.3}", report.wall_seconds);
    if !a.check {
        return Ok(0);
    }
    if report.checks.is_empty() {
        println!("# no acceptance checks defined for preset {}", cfg.preset);
    }
    for c in &report.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(if report.passed() { 0 } else { EXIT_CHECK })
}
