//! Command-line front end for the octonion network library: criterion
//! checks, controller gain design, simulation, and benchmark reproduction.
//!
//! Exit codes: 0 success/satisfied, 1 criterion unsatisfied, 2 config
//! error, 3 numerical failure.

// Indexed loops mirror the (p, l) criterion subscripts; `!(a > b)` guards
// reject NaN configuration values.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;

#[derive(Parser)]
#[command(
    name = "ovnn",
    version,
    about = "Octonion-valued network stability and control toolkit"
)]
struct Cli {
    /// Experiment config (TOML); required by check, gains, and simulate.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports, trajectories, and charts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Step-size override for simulations.
    #[arg(long, global = true)]
    step: Option<f64>,

    /// Seed for randomized initial states (nothing else is randomized).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the equilibrium-uniqueness and mu-stability criteria.
    Check,
    /// Design finite-time controller gains for the configured target.
    Gains,
    /// Integrate the configured run and export trajectories and charts.
    Simulate,
    /// Run a canonical benchmark bundle:
    /// example1 | example2 | example2-adaptive | example2-target2.
    Reproduce { name: String },
}

fn load_experiment(cli: &Cli) -> anyhow::Result<config::Experiment> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("this command needs --config PATH"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let parsed = config::parse(&text)?;
    config::build(&parsed)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Check => {
            let experiment = load_experiment(cli)?;
            commands::cmd_check(&experiment, &cli.out)
        }
        Command::Gains => {
            let experiment = load_experiment(cli)?;
            commands::cmd_gains(&experiment, &cli.out)
        }
        Command::Simulate => {
            let experiment = load_experiment(cli)?;
            commands::cmd_simulate(&experiment, &cli.out, cli.seed, cli.step)
        }
        Command::Reproduce { name } => commands::cmd_reproduce(name, &cli.out, cli.seed, cli.step),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(Outcome::ConfigError.code())
        }
    }
}
