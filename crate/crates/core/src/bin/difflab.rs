use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use difflab::diffeo::Manifold;
use difflab::experiments::{self, Experiment, Format, Params};

/// Run a seeded numeric experiment and write its report.
#[derive(Debug, Parser)]
#[command(name = "difflab", version)]
struct Cli {
    /// separated-family, wiener-young, bv-discontinuity, ac-continuity,
    /// change-of-variables or variation-invariance
    experiment: Experiment,
    /// Staircase truncation depth.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Regularity order.
    #[arg(long)]
    k: Option<usize>,
    /// Number of trials or samples.
    #[arg(long)]
    trials: Option<usize>,
    /// interval or circle; experiments that support both run both by default.
    #[arg(long)]
    manifold: Option<Manifold>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

fn run(cli: Cli) -> difflab::Result<bool> {
    let params = Params {
        depth: cli.depth,
        seed: cli.seed,
        k: cli.k,
        trials: cli.trials,
        manifold: cli.manifold,
        tol: experiments::tol_from_env()?,
    };
    let report = experiments::run(cli.experiment, &params)?;
    let text = report.render(cli.format)?;
    match cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.pass())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("difflab: {e}");
            ExitCode::from(2)
        }
    }
}
