//! Run a named experiment from library code and write its CSV and SVG.
//!
//! cargo run --example run_experiment -- squared-system /tmp/out

use std::path::PathBuf;

use krylov_or::experiments::{run_experiment, ExperimentConfig};

fn main() -> krylov_or::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "squared-system".into());
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let config = ExperimentConfig {
        k_max: Some(40),
        ..Default::default()
    };
    let output = run_experiment(&name, &config)?;
    for r in &output.reports {
        let last = r.errors.last().copied().unwrap_or(f64::NAN);
        println!(
            "{:<20} {:>4} points, last {}-error {last:.3e}",
            r.method,
            r.len(),
            r.norm
        );
    }
    output.write_to(&out)?;
    println!("wrote {}/{name}.csv and .svg", out.display());
    Ok(())
}
