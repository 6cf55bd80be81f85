use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fhn_isr::cli::{self, CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "fhn-isr", version, about = "Bistable FitzHugh-Nagumo analysis and ISR sweeps")]
struct Args {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Fixed points, Hopf and saddle-node values, folds, cycle period.
    Analyze,
    /// Sensitivity of both attractors over the epsilon grid.
    Ssf,
    /// Mahalanobis distances to the separatrix over the epsilon grid.
    Distance,
    /// Mean spike counts over the sigma grid for every (epsilon, basin).
    Sweep,
    /// A single noisy trajectory.
    Simulate,
}

fn run(args: Args) -> Result<cli::CommandOutput, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::load(None, std::env::vars())?,
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.out = out;
    }
    if let Some(format) = args.format {
        cfg.format = format;
    }
    match args.command {
        Command::Analyze => cli::cmd_analyze(&cfg),
        Command::Ssf => cli::cmd_ssf(&cfg),
        Command::Distance => cli::cmd_distance(&cfg),
        Command::Sweep => cli::cmd_sweep(&cfg),
        Command::Simulate => cli::cmd_simulate(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(out) => {
            println!("{}", out.summary);
            for f in out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fhn-isr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
