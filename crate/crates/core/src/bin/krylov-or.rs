use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use krylov_or::experiments::{
    parse_restart_lengths, run, Experiment, ExperimentConfig, SpectrumBlock, SpectrumSpec,
};
use krylov_or::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Run one of the Krylov experiments and write `<experiment>.csv` and
/// `<experiment>.svg`.
#[derive(Debug, Parser)]
#[command(name = "krylov-or", version)]
struct Cli {
    /// sign-compare, spectrum-cdf, proxy-rational, squared-system or restart-compare
    experiment: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// `file PATH`, `model`, or `intervals SPEC` (e.g. `-10:-1:1801,1:10:step=0.005`)
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "ARG"], allow_hyphen_values = true)]
    spectrum: Option<Vec<String>>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long)]
    quad_points: Option<usize>,
    /// Comma-separated, `inf` for no restart
    #[arg(long)]
    restart_lengths: Option<String>,
    #[arg(long, value_enum)]
    reorth: Option<Switch>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn config(cli: &Cli) -> Result<(Experiment, ExperimentConfig), Error> {
    let experiment: Experiment = cli.experiment.parse()?;
    let mut cfg = ExperimentConfig {
        n: cli.n,
        kappa: cli.kappa,
        rho: cli.rho,
        k_max: cli.k_max,
        c: cli.c,
        quad_points: cli.quad_points,
        reorth: cli.reorth.map(|s| matches!(s, Switch::On)),
        seed: cli.seed,
        ..Default::default()
    };
    if let Some(r) = &cli.restart_lengths {
        cfg.restart_lengths = Some(parse_restart_lengths(r)?);
    }
    if let Some(words) = &cli.spectrum {
        let arg = words.get(1);
        cfg.spectrum = Some(match (words[0].as_str(), arg) {
            ("file", Some(p)) => SpectrumSpec::single(SpectrumBlock::File(PathBuf::from(p))),
            ("model", None) => cfg.model(),
            ("intervals", Some(s)) => s.parse()?,
            (kind, _) => {
                return Err(Error::InvalidArgument(format!(
                    "--spectrum expects 'file PATH', 'model' or 'intervals SPEC', got '{kind}'"
                )))
            }
        });
    }
    if cfg.quad_points == Some(0) {
        return Err(Error::InvalidArgument(
            "--quad-points must be at least 1".into(),
        ));
    }
    Ok((experiment, cfg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, cfg) = match config(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("krylov-or: configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    let output = match run(experiment, &cfg) {
        Ok(o) => o,
        Err(e) if e.is_numerical() => {
            eprintln!("krylov-or: numerical failure in {experiment}: {e}");
            return ExitCode::from(3);
        }
        Err(e) => {
            eprintln!("krylov-or: {experiment}: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = output.write_to(&cli.out) {
        eprintln!("krylov-or: writing results to {}: {e}", cli.out.display());
        return ExitCode::from(2);
    }
    for r in &output.reports {
        if let (Some(&k), Some(&e)) = (r.ks.last(), r.errors.last()) {
            println!("{:<20} k={k:<4} {}-error={e:.3e}", r.method, r.norm);
        }
    }
    ExitCode::SUCCESS
}
