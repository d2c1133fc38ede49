//! Riemann invariants β₁ ≥ β₂ ≥ β₃ across the Whitham zone at t = 0.4 and
//! the elliptic modulus they define.
//!
//!     cargo run --release --example whitham_zone

use dswlab::initial_data::InitialDataModel;
use dswlab::whitham::WhithamZone;

fn main() -> dswlab::Result<()> {
    let model = InitialDataModel::sech2();
    let zone = WhithamZone::build(&model, 0.4)?;
    println!("zone [{:.7}, {:.7}], {} continuation nodes", zone.x_minus(), zone.x_plus(), zone.nodes().len());
    let (lo, hi) = (zone.x_minus(), zone.x_plus());
    for k in 1..10 {
        let x = lo + (hi - lo) * k as f64 / 10.0;
        let sol = zone.solve_at(x)?;
        let tr = sol.triple;
        println!(
            "x = {x:>10.6}: β = ({:>10.7}, {:>10.7}, {:>10.7})  s² = {:.6}",
            tr.beta1,
            tr.beta2,
            tr.beta3,
            tr.s2()
        );
    }
    Ok(())
}
