//! Preset pipelines behind `dswlab run`, and the pieces they share with the
//! single-purpose subcommands.

use super::config::{ExperimentConfig, Preset};
use super::plot::{Plot, Series};
use crate::asymptotics::{Asymptotics, MultiscaleOrder};
use crate::compare::{better_zone, compare_snapshot, loglog_fit, EdgeComparison, EdgeWindow, ScalingFit, ZoneBounds, ZONE_RULE};
use crate::error::{Error, Result};
use crate::initial_data::{breakup, InitialDataModel};
use crate::kdv::{kdv_solve, Grid1D, GridFunction, KdvOptions, KdvRun};
use crate::output::{fmt_num, Table};
use crate::painleve2::{self, HmConfig};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Quantity tracked across an ε sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    /// Δ_max of the multiscale solution in the edge window.
    Multiscale,
    /// Elliptic/Hopf error in the edge window.
    EllipticEdge,
    /// Elliptic error in the middle third of the zone.
    EllipticInterior,
    /// Width of the zone where the multiscale solution is better.
    ZoneWidth,
}

impl Target {
    pub const ALL: [Target; 4] = [Target::Multiscale, Target::EllipticEdge, Target::EllipticInterior, Target::ZoneWidth];

    pub fn name(self) -> &'static str {
        match self {
            Target::Multiscale => "multiscale",
            Target::EllipticEdge => "elliptic-edge",
            Target::EllipticInterior => "elliptic-interior",
            Target::ZoneWidth => "zone-width",
        }
    }

    pub fn of(self, c: &EdgeComparison) -> f64 {
        match self {
            Target::Multiscale => c.multiscale_edge,
            Target::EllipticEdge => c.elliptic_edge,
            Target::EllipticInterior => c.elliptic_interior,
            Target::ZoneWidth => c.zone.width(),
        }
    }
}

/// Outcome of one acceptance check in a `--check` run.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Files and checks produced by a run.
#[derive(Debug, Default)]
pub struct RunReport {
    pub outdir: PathBuf,
    /// Paths relative to `outdir`, in write order.
    pub outputs: Vec<String>,
    pub checks: Vec<CheckOutcome>,
    pub wall_seconds: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Decision toggles recorded in every manifest.
pub fn decisions(cfg: &ExperimentConfig) -> Vec<(&'static str, String)> {
    vec![
        ("zone_rule", ZONE_RULE.to_string()),
        ("edge_window_z", cfg.window.to_string()),
        ("interior_window", "middle third of [x-, x+]".into()),
        ("elliptic_invariants", "Whitham triple solved at each x, held fixed in the theta function".into()),
        ("multiscale_order", "epsilon^(1/3)".into()),
        ("small_amplitude_sign", "delta = -sqrt((x - x-)/c)".into()),
        ("hm_right_tail", "leading Airy asymptotic".into()),
        ("kdv_scheme", "Fourier pseudospectral, ETDRK4, 32 contour points, Nyquist mode zeroed".into()),
        ("kdv_dealias", cfg.dealias.to_string()),
    ]
}

pub fn kdv_options(cfg: &ExperimentConfig) -> KdvOptions {
    KdvOptions {
        dt: cfg.dt,
        dealias: cfg.dealias,
        blowup: cfg.blowup,
        tail_gate: Some(cfg.tail_gate),
        ..KdvOptions::default()
    }
}

pub fn grid_for(half_width: f64, n: Option<usize>, epsilon: f64) -> Result<Grid1D> {
    match n {
        Some(n) => Grid1D::new(half_width, n),
        None => Grid1D::resolving(half_width, epsilon),
    }
}

/// KdV snapshots at the sorted times.
pub fn kdv_snapshots(model: &InitialDataModel, cfg: &ExperimentConfig, epsilon: f64, times: &[f64]) -> Result<KdvRun> {
    let grid = grid_for(cfg.half_width, cfg.n, epsilon)?;
    kdv_solve(model, epsilon, grid, times, &kdv_options(cfg))
}

/// Grid indices of u inside [lo, hi].
pub fn indices_in(u: &GridFunction, lo: f64, hi: f64) -> Vec<usize> {
    (0..u.grid.n()).filter(|&j| (lo..=hi).contains(&u.grid.x(j))).collect()
}

/// Per-ε rows followed, after a blank-line block separator, by the fit row.
/// Both blocks are addressable from gnuplot with `index 0` / `index 1`.
pub fn scaling_text(target: Target, t: f64, epsilons: &[f64], values: &[f64]) -> Result<(String, ScalingFit)> {
    let fit = loglog_fit(epsilons, values)?;
    let mut rows = Table::new(&["epsilon", target.name()]);
    rows.meta("target", target.name()).meta("t", t);
    for (e, v) in epsilons.iter().zip(values) {
        rows.push(vec![*e, *v]);
    }
    let mut summary = Table::new(&["a", "b", "r", "sigma_a"]);
    summary.comment("fit: log10(value) = a log10(epsilon) - b");
    summary.push(vec![fit.a, fit.b, fit.r, fit.sigma_a]);
    Ok((format!("{}\n\n{}", rows.render(), summary.render()), fit))
}

pub fn zone_table(zones: &[ZoneBounds], x_minus: f64) -> Table {
    let mut t = Table::new(&["t", "epsilon", "left", "right", "width", "width_over_abs_xminus", "left_closed", "right_closed"]);
    t.meta("rule", ZONE_RULE);
    for z in zones {
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        t.push(vec![z.t, z.epsilon, z.left, z.right, z.width(), z.width() / x_minus.abs(), flag(z.left_closed), flag(z.right_closed)]);
    }
    t
}

/// Zone where the multiscale solution beats elliptic/Hopf for one snapshot.
pub fn zone_for(u: &GridFunction, asym: &Asymptotics) -> Result<ZoneBounds> {
    let eps = u.epsilon;
    better_zone(
        u,
        |x| Ok(asym.multiscale(x, eps, MultiscaleOrder::OneThird)),
        |x| asym.elliptic_hopf(x, eps),
        asym.edge(),
    )
}

fn tag(epsilon: f64, t: Option<f64>) -> String {
    match t {
        Some(t) => format!("eps{epsilon}_t{t}"),
        None => format!("eps{epsilon}"),
    }
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    model: InitialDataModel,
    outdir: PathBuf,
    gnuplot: bool,
    report: RunReport,
}

impl Ctx<'_> {
    fn write(&mut self, name: &str, table: &Table) -> Result<()> {
        self.write_text(name, &table.render())
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.outdir.join(name);
        std::fs::write(&path, text)?;
        self.report.outputs.push(name.to_string());
        Ok(())
    }

    fn plot(&mut self, plot: &Plot) -> Result<()> {
        if self.gnuplot {
            let name = format!("{}.gp", plot.stem);
            self.write_text(&name, &plot.script())?;
        }
        Ok(())
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.report.checks.push(CheckOutcome {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn snapshot_table(&self, u: &GridFunction, values: impl Fn(usize, f64) -> Result<Vec<f64>>, columns: &[&str]) -> Result<Table> {
        let mut t = Table::new(columns);
        t.meta("t", u.time).meta("epsilon", u.epsilon);
        for j in indices_in(u, self.cfg.xmin, self.cfg.xmax) {
            t.push(values(j, u.grid.x(j))?);
        }
        Ok(t)
    }
}

/// Execute a preset. Output files land in `outdir`, which is created.
pub fn run(cfg: &ExperimentConfig, outdir: &Path, gnuplot: bool) -> Result<RunReport> {
    let start = Instant::now();
    cfg.validate()?;
    std::fs::create_dir_all(outdir)?;
    let mut ctx = Ctx {
        cfg,
        model: InitialDataModel::from_spec(&cfg.initial_data)?,
        outdir: outdir.to_path_buf(),
        gnuplot,
        report: RunReport {
            outdir: outdir.to_path_buf(),
            ..RunReport::default()
        },
    };
    match cfg.preset {
        Preset::HastingsMcleod => hastings_mcleod(&mut ctx)?,
        Preset::Figure1 => figure1(&mut ctx)?,
        Preset::Figure4 => edge_figures(&mut ctx, false)?,
        Preset::Figure5 => edge_figures(&mut ctx, true)?,
        Preset::Scaling | Preset::Zonewidth => sweep(&mut ctx)?,
        Preset::Breakup => breakup_preset(&mut ctx)?,
    }
    ctx.report.wall_seconds = start.elapsed().as_secs_f64();
    write_manifest(&ctx.report, cfg, gnuplot)?;
    Ok(ctx.report)
}

/// `manifest.txt`: comment lines with versions, decisions, checks, outputs
/// and wall time, then the configuration itself, so the manifest can be fed
/// back to `dswlab run --config`.
pub fn write_manifest(report: &RunReport, cfg: &ExperimentConfig, gnuplot: bool) -> Result<()> {
    let mut s = String::new();
    s.push_str("# dswlab run manifest\n");
    s.push_str(&format!("# dswlab_version = {}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("# build = {}\n", if cfg!(debug_assertions) { "debug" } else { "optimized" }));
    s.push_str(&format!("# outdir = {}\n", report.outdir.display()));
    s.push_str(&format!("# gnuplot = {gnuplot}\n"));
    for (k, v) in decisions(cfg) {
        s.push_str(&format!("# decision {k} = {v}\n"));
    }
    for c in &report.checks {
        s.push_str(&format!("# check {} = {} ({})\n", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail));
    }
    for o in &report.outputs {
        s.push_str(&format!("# output = {o}\n"));
    }
    s.push_str(&format!("# wall_time_seconds = {:.3}\n", report.wall_seconds));
    s.push_str(&cfg.render());
    std::fs::write(report.outdir.join("manifest.txt"), s)?;
    Ok(())
}

/// Collocation residual limit for the Hastings–McLeod check.
const HM_RESIDUAL: f64 = 1e-8;

fn hastings_mcleod(ctx: &mut Ctx) -> Result<()> {
    let hm = HmConfig {
        tolerance: ctx.cfg.hm_tol,
        relaxation: ctx.cfg.hm_mu,
        ..HmConfig::default()
    };
    let sol = painleve2::solve(&hm)?;
    let mut t = Table::new(&["z", "A", "residual"]);
    t.meta("z_left", hm.z_left).meta("z_right", hm.z_right).meta("degree", hm.degree).meta("mu", hm.relaxation);
    let n = 801;
    for k in 0..n {
        let z = hm.z_left + (hm.z_right - hm.z_left) * k as f64 / (n - 1) as f64;
        t.push(vec![z, sol.eval(z), sol.residual(z)]);
    }
    ctx.write("hastings_mcleod.dat", &t)?;
    ctx.plot(&Plot::new("hastings_mcleod", "z", "A(z)").series(Series::new("hastings_mcleod.dat", "1:2", "Hastings-McLeod")))?;
    let r = sol.max_collocation_residual();
    ctx.check("hm-residual", r < HM_RESIDUAL, format!("max collocation residual {r:.3e} < {HM_RESIDUAL:e}"));
    Ok(())
}

fn figure1(ctx: &mut Ctx) -> Result<()> {
    for &eps in &ctx.cfg.epsilons.clone() {
        let run = kdv_snapshots(&ctx.model, ctx.cfg, eps, &ctx.cfg.times)?;
        let mut plot = Plot::new(&format!("kdv_{}", tag(eps, None)), "x", "u");
        for u in &run.snapshots {
            let name = format!("kdv_{}.dat", tag(eps, Some(u.time)));
            ctx.write(&name, &u.to_table("KdV snapshot"))?;
            plot = plot.series(Series::new(&name, "1:2", &format!("t = {}", u.time)));
        }
        ctx.plot(&plot)?;
    }
    Ok(())
}

/// x⁻(0.4) for the sech² reference data, with its tolerance.
const X_MINUS_04: (f64, f64) = (-3.2297, 5e-4);

fn edge_figures(ctx: &mut Ctx, differences: bool) -> Result<()> {
    let cfg = ctx.cfg;
    for &t in &cfg.times {
        let asym = Asymptotics::new(&ctx.model, t)?;
        if t == 0.4 && ctx.model.name() == "sech2" {
            let x = asym.zone().x_minus();
            ctx.check("leading-edge", (x - X_MINUS_04.0).abs() <= X_MINUS_04.1, format!("x-(0.4) = {x:.7}"));
        }
        for &eps in &cfg.epsilons {
            let run = kdv_snapshots(&ctx.model, cfg, eps, &[t])?;
            let u = run.last();
            let id = tag(eps, Some(t));
            let (xm, xp) = (asym.zone().x_minus(), asym.zone().x_plus());
            if !differences {
                let kdv = ctx.snapshot_table(u, |j, x| Ok(vec![x, u.values[j]]), &["x", "u"])?;
                let ell = ctx.snapshot_table(u, |_, x| Ok(vec![x, asym.elliptic_hopf(x, eps)?]), &["x", "u_elliptic_hopf"])?;
                let ms = ctx.snapshot_table(u, |_, x| Ok(vec![x, asym.multiscale(x, eps, MultiscaleOrder::OneThird)]), &["x", "u_multiscale"])?;
                ctx.write(&format!("kdv_{id}.dat"), &kdv)?;
                ctx.write(&format!("elliptic_hopf_{id}.dat"), &ell)?;
                ctx.write(&format!("multiscale_{id}.dat"), &ms)?;
                let p = Plot::new(&format!("curves_{id}"), "x", "u")
                    .stacked()
                    .series(Series::new(&format!("kdv_{id}.dat"), "1:2", "KdV"))
                    .series(Series::new(&format!("elliptic_hopf_{id}.dat"), "1:2", "elliptic + Hopf"))
                    .series(Series::new(&format!("multiscale_{id}.dat"), "1:2", "multiscale"));
                ctx.plot(&p)?;
                continue;
            }
            let c = compare_snapshot(u, &asym, EdgeWindow { z_half_width: cfg.window })?;
            let zone = c.zone;
            let inside = |x: f64| if x > xm && x < xp { 1.0 } else { 0.0 };
            let d_ell = ctx.snapshot_table(
                u,
                |j, x| Ok(vec![x, u.values[j] - asym.elliptic_hopf(x, eps)?, inside(x)]),
                &["x", "u_minus_elliptic_hopf", "in_whitham_zone"],
            )?;
            let d_comp = ctx.snapshot_table(
                u,
                |j, x| {
                    let in_zone = if x >= zone.left && x <= zone.right { 1.0 } else { 0.0 };
                    Ok(vec![x, u.values[j] - asym.composite(x, eps, &zone)?, inside(x), in_zone])
                },
                &["x", "u_minus_patched", "in_whitham_zone", "in_multiscale_zone"],
            )?;
            ctx.write(&format!("diff_elliptic_hopf_{id}.dat"), &d_ell)?;
            ctx.write(&format!("diff_patched_{id}.dat"), &d_comp)?;
            let mut zt = zone_table(&[zone], xm);
            zt.meta("x_minus", xm).meta("x_plus", xp);
            ctx.write(&format!("zone_{id}.dat"), &zt)?;
            let p = Plot::new(&format!("differences_{id}"), "x", "difference")
                .stacked()
                .series(Series::new(&format!("diff_elliptic_hopf_{id}.dat"), "1:2", "KdV - elliptic/Hopf"))
                .series(Series::new(&format!("diff_patched_{id}.dat"), "1:2", "KdV - patched"));
            ctx.plot(&p)?;
            ctx.check(
                format!("patch-improvement eps={eps}"),
                c.composite_edge < c.elliptic_edge,
                format!("patched {} < elliptic/Hopf {} in the edge window", fmt_num(c.composite_edge), fmt_num(c.elliptic_edge)),
            );
        }
    }
    Ok(())
}

/// Slope bounds per target (and r > 0.99 where required) for `--check`.
fn slope_check(target: Target) -> (f64, f64, Option<f64>) {
    match target {
        Target::EllipticInterior => (0.8, 1.2, None),
        Target::EllipticEdge => (0.23, 0.43, None),
        Target::Multiscale => (0.55, 0.75, Some(0.99)),
        Target::ZoneWidth => (0.55, 0.78, Some(0.99)),
    }
}

fn sweep(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let targets: &[Target] = if cfg.preset == Preset::Zonewidth {
        &[Target::ZoneWidth]
    } else {
        &[Target::Multiscale, Target::EllipticEdge, Target::EllipticInterior]
    };
    for &t in &cfg.times {
        let asym = Asymptotics::new(&ctx.model, t)?;
        let xm = asym.zone().x_minus();
        let mut rows = Vec::new();
        for &eps in &cfg.epsilons {
            let run = kdv_snapshots(&ctx.model, cfg, eps, &[t])?;
            let u = run.last();
            let c = compare_snapshot(u, &asym, EdgeWindow { z_half_width: cfg.window })?;
            if cfg.preset == Preset::Scaling {
                let id = tag(eps, Some(t));
                let d = ctx.snapshot_table(
                    u,
                    |j, x| {
                        let inside = if x > xm && x < asym.zone().x_plus() { 1.0 } else { 0.0 };
                        Ok(vec![x, u.values[j] - asym.multiscale(x, eps, MultiscaleOrder::OneThird), inside])
                    },
                    &["x", "u_minus_multiscale", "in_whitham_zone"],
                )?;
                ctx.write(&format!("diff_multiscale_{id}.dat"), &d)?;
            }
            rows.push(c);
        }
        let eps: Vec<f64> = rows.iter().map(|c| c.epsilon).collect();
        if cfg.preset == Preset::Zonewidth {
            let zones: Vec<ZoneBounds> = rows.iter().map(|c| c.zone).collect();
            ctx.write(&format!("zones_t{t}.dat"), &zone_table(&zones, xm))?;
            let closed = zones.iter().all(|z| z.closed());
            ctx.check(format!("zones-closed t={t}"), closed, "every zone has a crossing on both sides");
        } else {
            let mut all = Table::new(&["epsilon", "multiscale", "elliptic_edge", "elliptic_interior", "zone_left", "zone_right", "zone_width", "patched_edge"]);
            all.meta("t", t).meta("edge_window_z", cfg.window);
            for c in &rows {
                all.push(vec![c.epsilon, c.multiscale_edge, c.elliptic_edge, c.elliptic_interior, c.zone.left, c.zone.right, c.zone.width(), c.composite_edge]);
                ctx.check(
                    format!("patch-improvement eps={}", c.epsilon),
                    c.composite_edge < c.elliptic_edge,
                    format!("patched {} < elliptic/Hopf {}", fmt_num(c.composite_edge), fmt_num(c.elliptic_edge)),
                );
            }
            ctx.write(&format!("errors_t{t}.dat"), &all)?;
        }
        let mut plot = Plot::new(&format!("scaling_t{t}"), "epsilon", "error").loglog();
        for &target in targets {
            let values: Vec<f64> = rows.iter().map(|c| target.of(c)).collect();
            let name = format!("scaling_{}_t{t}.dat", target.name());
            let (text, fit) = scaling_text(target, t, &eps, &values)?;
            ctx.write_text(&name, &text)?;
            plot = plot.series(Series::new(&name, "1:2", target.name()).index(0));
            let (lo, hi, r) = slope_check(target);
            let pass = fit.a >= lo && fit.a <= hi && r.is_none_or(|r| fit.r > r);
            let rule = match r {
                Some(r) => format!("a in [{lo}, {hi}], r > {r}"),
                None => format!("a in [{lo}, {hi}]"),
            };
            ctx.check(
                format!("{}-slope t={t}", target.name()),
                pass,
                format!("a = {:.4}, b = {:.4}, r = {:.5}, sigma_a = {:.4}; {rule}", fit.a, fit.b, fit.r, fit.sigma_a),
            );
        }
        ctx.plot(&plot)?;
    }
    Ok(())
}

/// Breakup point of the sech² data and its tolerances.
const BREAKUP_REF: (f64, f64, f64, f64) = (0.2165, 1e-3, -1.5245, 2e-3);

fn breakup_preset(ctx: &mut Ctx) -> Result<()> {
    let cfg = ctx.cfg;
    let b = breakup(&ctx.model)?;
    let mut bt = Table::new(&["t_c", "x_c", "xi_c", "u_c"]);
    bt.push(vec![b.t_c, b.x_c, b.xi_c, b.u_c]);
    ctx.write("breakup_point.dat", &bt)?;
    if ctx.model.name() == "sech2" {
        let pass = (b.t_c - BREAKUP_REF.0).abs() <= BREAKUP_REF.1 && (b.x_c - BREAKUP_REF.2).abs() <= BREAKUP_REF.3;
        ctx.check("breakup-point", pass, format!("t_c = {:.6}, x_c = {:.6}", b.t_c, b.x_c));
    }
    if let Some(t) = cfg.times.iter().find(|&&t| t <= b.t_c) {
        return Err(Error::Config(format!("breakup preset times must exceed t_c = {:.6}, got {t}", b.t_c)));
    }
    let mut times = cfg.times.clone();
    times.sort_by(f64::total_cmp);
    for &eps in &cfg.epsilons {
        let run = kdv_snapshots(&ctx.model, cfg, eps, &times)?;
        let mut plot = Plot::new(&format!("breakup_{}", tag(eps, None)), "x", "u").stacked();
        for u in &run.snapshots {
            let asym = Asymptotics::new(&ctx.model, u.time)?;
            let xp = asym.zone().x_plus();
            let id = tag(eps, Some(u.time));
            let kdv = ctx.snapshot_table(u, |j, x| Ok(vec![x, u.values[j]]), &["x", "u"])?;
            let mut ms = Table::new(&["x", "u_multiscale"]);
            ms.meta("t", u.time).meta("epsilon", eps).meta("x_plus", xp);
            for j in indices_in(u, cfg.xmin, cfg.xmax.min(xp)) {
                let x = u.grid.x(j);
                ms.push(vec![x, asym.multiscale(x, eps, MultiscaleOrder::OneThird)]);
            }
            ctx.write(&format!("kdv_{id}.dat"), &kdv)?;
            ctx.write(&format!("multiscale_{id}.dat"), &ms)?;
            plot = plot
                .series(Series::new(&format!("kdv_{id}.dat"), "1:2", &format!("KdV t = {}", u.time)))
                .series(Series::new(&format!("multiscale_{id}.dat"), "1:2", &format!("multiscale t = {}", u.time)).same_panel());
        }
        ctx.plot(&plot)?;
    }
    Ok(())
}
