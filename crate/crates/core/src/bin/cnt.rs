use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monitored_entropy::error::{Error, Result};
use monitored_entropy::experiment::{run, Experiment, ExperimentConfig};

/// Dynamical entropy and purification of monitored quantum systems.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV tables and the manifest.
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Single-reading purification J_s, microscopic observable, and channel iteration.
    Fig2a,
    /// Single-reading purification J_s, mesoscopic observable, and Wick residuals.
    Fig2b,
    /// Purification rate J/t, microscopic observable.
    Fig2c,
    /// Purification rate J/t, mesoscopic observable.
    Fig2d,
    /// Spectrum maximizing the entropy rate under the fluctuation-dissipation constraint.
    Fig3,
    /// Universal rate bounds and the adversarial spectrum suite.
    Bounds,
    /// Gaussian engine against the closed-form rates.
    Converge,
    /// Truncated oscillator against the Gaussian engine.
    Oracle,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Fig2a => Experiment::Fig2a,
            Command::Fig2b => Experiment::Fig2b,
            Command::Fig2c => Experiment::Fig2c,
            Command::Fig2d => Experiment::Fig2d,
            Command::Fig3 => Experiment::Fig3,
            Command::Bounds => Experiment::Bounds,
            Command::Converge => Experiment::Converge,
            Command::Oracle => Experiment::Oracle,
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let experiment = Experiment::from(cli.command);
    let config = match &cli.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    config.validate(experiment)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter { name: "threads", reason: "must be at least 1".into() });
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter { name: "threads", reason: e.to_string() })?;
    }
    let report = run(experiment, &config)?;
    for path in report.write(&cli.out, experiment, &config)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
