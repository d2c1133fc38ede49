//! Sampled initial data: a single negative hump given as (x, u₀) pairs,
//! checked for admissibility and followed to its breakup.
//!
//!     cargo run --example custom_initial_data

use dswlab::initial_data::{breakup, validate, InitialDataModel};

fn main() -> dswlab::Result<()> {
    // -1/(1 + x²)² decays only algebraically, so the decay check (which
    // guards the periodic KdV box) reports FAILED; everything that depends
    // on the profile alone, breakup and the Whitham zone, still works
    let xs: Vec<f64> = (0..=800).map(|k| -20.0 + 0.05 * k as f64).collect();
    let us: Vec<f64> = xs.iter().map(|x| -1.0 / (1.0 + x * x).powi(2)).collect();
    let model = InitialDataModel::from_samples("rational", &xs, &us)?;
    let report = validate(&model);
    for c in &report.checks {
        println!("{:<28} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    let b = breakup(&model)?;
    println!("breakup at t_c = {:.6}, x_c = {:.6}", b.t_c, b.x_c);
    // the same data from a file: initial_data = file:<path>
    let path = std::env::temp_dir().join("dswlab_rational_u0.dat");
    let text: String = xs.iter().zip(&us).map(|(x, u)| format!("{x} {u}\n")).collect();
    std::fs::write(&path, text)?;
    let again = InitialDataModel::from_spec(&format!("file:{}", path.display()))?;
    println!("from file: t_c = {:.6}", breakup(&again)?.t_c);
    Ok(())
}
