//! Drive a preset pipeline from code, as `dswlab run --preset ... --check`
//! does, and list the manifest.
//!
//!     cargo run --release --example run_preset -- figure5 0.04

use dswlab::cli::config::{ExperimentConfig, Preset};
use dswlab::cli::pipeline;

fn main() -> dswlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().as_deref().unwrap_or("hastings-mcleod").parse()?;
    let mut cfg = ExperimentConfig::preset(preset);
    if let Some(e) = args.next() {
        cfg.epsilons = dswlab::cli::config::parse_list(&e).map_err(dswlab::Error::Config)?;
    }
    let outdir = std::env::temp_dir().join(format!("dswlab_{preset}"));
    let report = pipeline::run(&cfg, &outdir, true)?;
    for c in &report.checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{} files in {} ({:.1} s)", report.outputs.len(), outdir.display(), report.wall_seconds);
    print!("{}", std::fs::read_to_string(outdir.join("manifest.txt"))?);
    Ok(())
}
