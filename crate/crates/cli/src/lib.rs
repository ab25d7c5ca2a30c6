//! Command-line driver for the `ergochan` library: trajectory integration,
//! non-Markovianity measures and divisibility scans written as CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_config, parse_config_str, RunConfig};
pub use error::CliError;

/// Environment variable selecting the worker thread count (0 = automatic).
pub const THREADS_ENV: &str = "ERGOCHAN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "ergochan",
    version,
    about = "Ergodic channel dynamics and non-Markovianity measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the master equation and compare with the exact channel.
    Evolve(RunArgs),
    /// Tabulate RHP, BLP and ergotropic measures over the time grid.
    Measures(RunArgs),
    /// Scan infinitesimal divisibility of the qubit family over (|b|, p).
    Divscan(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, overriding `output_dir` from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed, overriding `seed` from the config.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Configures the global thread pool from [`THREADS_ENV`].
pub fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        CliError::Config(format!(
            "{THREADS_ENV}: expected a nonnegative integer, found {value:?}"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("{THREADS_ENV}: {e}")))?;
    }
    Ok(())
}

type CommandFn = fn(&RunConfig, &std::path::Path) -> Result<Vec<PathBuf>, CliError>;

/// Runs one subcommand; writes the canonical config next to its outputs and
/// returns every file written.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let (args, f): (&RunArgs, CommandFn) = match &cli.command {
        Command::Evolve(a) => (a, commands::evolve),
        Command::Measures(a) => (a, commands::measures),
        Command::Divscan(a) => (a, commands::divscan),
    };
    let mut config = parse_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output_dir = out.display().to_string();
    }
    let out = PathBuf::from(&config.output_dir);
    let mut written = f(&config, &out)?;
    let canonical = out.join("config.json");
    std::fs::write(&canonical, config.to_canonical_json())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", canonical.display())))?;
    written.push(canonical);
    Ok(written)
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
