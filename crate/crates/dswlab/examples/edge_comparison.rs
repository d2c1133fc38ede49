//! One KdV snapshot against the asymptotic solutions: edge and interior
//! errors and the zone where the multiscale solution wins.
//!
//!     cargo run --release --example edge_comparison -- 0.04

use dswlab::asymptotics::Asymptotics;
use dswlab::compare::{compare_snapshot, EdgeWindow};
use dswlab::initial_data::InitialDataModel;
use dswlab::kdv::{kdv_solve, Grid1D, KdvOptions};

fn main() -> dswlab::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.08);
    let t = 0.4;
    let model = InitialDataModel::sech2();
    let asym = Asymptotics::new(&model, t)?;
    let run = kdv_solve(&model, eps, Grid1D::resolving(15.0, eps)?, &[t], &KdvOptions::default())?;
    let c = compare_snapshot(run.last(), &asym, EdgeWindow::default())?;
    println!("ε = {eps}, t = {t}");
    println!("  multiscale Δ_max near x-       {:.4e}", c.multiscale_edge);
    println!("  elliptic/Hopf error near x-    {:.4e}", c.elliptic_edge);
    println!("  elliptic error, zone interior  {:.4e}", c.elliptic_interior);
    println!("  patched error near x-          {:.4e}", c.composite_edge);
    println!("  multiscale better on [{:.5}, {:.5}] (closed: {})", c.zone.left, c.zone.right, c.zone.closed());
    Ok(())
}
