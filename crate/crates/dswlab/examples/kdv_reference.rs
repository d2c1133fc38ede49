//! Reference KdV solution u_t + 6uu_x + ε²u_xxx = 0 from u₀ = -sech²x, with
//! conserved-quantity drift and a checkpoint round trip.
//!
//!     cargo run --release --example kdv_reference -- 0.1

use dswlab::initial_data::InitialDataModel;
use dswlab::kdv::{conserved, kdv_solve, Grid1D, GridFunction, KdvOptions};

fn main() -> dswlab::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let model = InitialDataModel::sech2();
    let grid = Grid1D::resolving(15.0, eps)?;
    let run = kdv_solve(&model, eps, grid, &[0.0, 0.2, 0.4], &KdvOptions::default())?;
    println!("ε = {eps}: N = {}, {} steps", grid.n(), run.steps);
    for (c, tail) in conserved(&run.snapshots).iter().zip(&run.tail_ratios) {
        println!("t = {:.2}: mass {:.15} momentum {:.15} spectral tail {tail:.1e}", c.time, c.mass, c.momentum);
    }
    let u = run.last();
    let (j, min) = u.values.iter().enumerate().fold((0, f64::INFINITY), |m, (j, &v)| if v < m.1 { (j, v) } else { m });
    println!("min u = {min:.6} at x = {:.4}, max u = {:.6}", u.grid.x(j), u.values.iter().cloned().fold(f64::MIN, f64::max));

    let path = std::env::temp_dir().join("dswlab_kdv_checkpoint.dat");
    u.write_checkpoint(&path)?;
    let back = GridFunction::read_checkpoint(&path)?;
    println!("checkpoint {} round trip exact: {}", path.display(), back == *u);
    Ok(())
}
