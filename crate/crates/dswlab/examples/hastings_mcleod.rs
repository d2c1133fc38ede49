//! Solve Painlevé-II for the Hastings–McLeod solution on [-10, 10] and
//! report its residual and a few values.
//!
//!     cargo run --release --example hastings_mcleod

use dswlab::painleve2::{self, HmConfig};

fn main() -> dswlab::Result<()> {
    let cfg = HmConfig::default();
    let sol = painleve2::solve(&cfg)?;
    println!("degree {}, relaxation μ = {}", cfg.degree, cfg.relaxation);
    println!("max collocation residual {:.3e}", sol.max_collocation_residual());
    for z in [-8.0, -4.0, -1.0, 0.0, 1.0, 4.0, 8.0] {
        // left of the origin A ~ √(-z/2), right of it A ~ Ai(z)
        println!("A({z:>4}) = {:.15}   A'' - zA - 2A³ = {:.1e}", sol.eval(z), sol.residual(z));
    }
    Ok(())
}
