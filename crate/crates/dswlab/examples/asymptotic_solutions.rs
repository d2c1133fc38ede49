//! Elliptic, small-amplitude and multiscale descriptions near the leading
//! edge at t = 0.4, ε = 0.01.
//!
//!     cargo run --release --example asymptotic_solutions

use dswlab::asymptotics::{Asymptotics, MultiscaleOrder};
use dswlab::initial_data::InitialDataModel;

fn main() -> dswlab::Result<()> {
    let eps = 0.01;
    let asym = Asymptotics::new(&InitialDataModel::sech2(), 0.4)?;
    let e = *asym.edge();
    println!("x- = {:.7}, u = {:.6}, v = {:.6}, v_t = {:.5}, phi0 = {:.6}", e.x_minus, e.u, e.v, e.v_t, e.phi0);
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "x - x-", "elliptic", "small amp", "ms ε^1/3", "ms ε^2/3");
    for off in [-0.2, -0.05, 0.0, 0.01, 0.05, 0.1, 0.3] {
        let x = e.x_minus + off;
        let ell = asym.elliptic_hopf(x, eps)?;
        let small = if off >= 0.0 { asym.small_amplitude(x, eps)? } else { f64::NAN };
        let m1 = asym.multiscale(x, eps, MultiscaleOrder::OneThird);
        let m2 = asym.multiscale(x, eps, MultiscaleOrder::TwoThirds);
        println!("{off:>10} {ell:>12.7} {small:>12.7} {m1:>12.7} {m2:>12.7}");
    }
    Ok(())
}
