//! The dispersionless (Hopf) limit of u₀ = -sech²x: point of gradient
//! catastrophe and the multivalued characteristic solution after it.
//!
//!     cargo run --example breakup_and_hopf

use dswlab::initial_data::{breakup, hopf_solve, validate, InitialDataModel};

fn main() -> dswlab::Result<()> {
    let model = InitialDataModel::sech2();
    let report = validate(&model);
    println!("admissible initial data: {}", report.passed());

    let b = breakup(&model)?;
    println!("breakup: t_c = {:.10}, x_c = {:.10}, u_c = {:.10}", b.t_c, b.x_c, b.u_c);

    let t = 0.4;
    for x in [-5.0, -3.0, -2.5, -1.0, 0.5] {
        let h = hopf_solve(&model, x, t)?;
        let us: Vec<String> = h.branches().iter().map(|b| format!("{:.6}", b.u)).collect();
        println!("t = {t}, x = {x:>5}: {} branch(es) u = [{}]", us.len(), us.join(", "));
    }
    Ok(())
}
