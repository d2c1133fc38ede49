//! Trajectory of the leading edge x⁻(t) of the oscillation zone together
//! with the edge data used by the multiscale solution.
//!
//!     cargo run --release --example leading_edge

use dswlab::initial_data::InitialDataModel;
use dswlab::whitham::{trailing_edge_path, EdgeTrajectory};

fn main() -> dswlab::Result<()> {
    let model = InitialDataModel::sech2();
    let traj = EdgeTrajectory::build(&model, 0.4, 1000)?;
    let ts = [0.22, 0.25, 0.3, 0.35, 0.4];
    let trailing = trailing_edge_path(&model, &ts)?;
    println!("{:>5} {:>12} {:>12} {:>11} {:>11} {:>9} {:>11}", "t", "x-", "x+", "u", "v", "c", "phi0");
    for (t, tr) in ts.iter().zip(&trailing) {
        let e = traj.state_at(*t)?;
        println!(
            "{t:>5} {:>12.7} {:>12.7} {:>11.7} {:>11.7} {:>9.4} {:>11.7}",
            e.x_minus, tr.x, e.u, e.v, e.c, e.phi0
        );
    }
    Ok(())
}
