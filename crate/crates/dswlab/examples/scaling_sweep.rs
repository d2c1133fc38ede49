//! Error sweep over ε at t = 0.4 with log-log fits,
//! log₁₀Δ = a log₁₀ε - b.
//!
//!     cargo run --release --example scaling_sweep -- 0.08 0.04 0.02

use dswlab::asymptotics::Asymptotics;
use dswlab::compare::{compare_snapshot, loglog_fit, EdgeComparison, EdgeWindow};
use dswlab::initial_data::InitialDataModel;
use dswlab::kdv::{kdv_solve, Grid1D, KdvOptions};

fn main() -> dswlab::Result<()> {
    let mut eps: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if eps.len() < 3 {
        eps = vec![0.08, 0.04, 0.02];
    }
    let model = InitialDataModel::sech2();
    let asym = Asymptotics::new(&model, 0.4)?;
    let mut rows = Vec::new();
    for &e in &eps {
        let run = kdv_solve(&model, e, Grid1D::resolving(15.0, e)?, &[0.4], &KdvOptions::default())?;
        let c = compare_snapshot(run.last(), &asym, EdgeWindow::default())?;
        println!("ε = {e:<6} Δ_ms = {:.4e}  edge = {:.4e}  interior = {:.4e}  zone width = {:.4e}",
            c.multiscale_edge, c.elliptic_edge, c.elliptic_interior, c.zone.width());
        rows.push(c);
    }
    let targets: [(&str, fn(&EdgeComparison) -> f64); 4] = [
        ("multiscale", |c| c.multiscale_edge),
        ("elliptic edge", |c| c.elliptic_edge),
        ("elliptic interior", |c| c.elliptic_interior),
        ("zone width", |c| c.zone.width()),
    ];
    for (name, f) in targets {
        let v: Vec<f64> = rows.iter().map(f).collect();
        let fit = loglog_fit(&eps, &v)?;
        println!("{name:<18} a = {:.3} ± {:.3}, b = {:.3}, r = {:.4}", fit.a, fit.sigma_a, fit.b, fit.r);
    }
    Ok(())
}
