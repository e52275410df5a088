//! `threatsim`: writes CSV data for phase portraits, trajectories, rest
//! points, agent-based runs, parameter sweeps and the payoff oracle.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

use config::{resolve, CommandKind, Layer};

#[derive(Debug, Parser)]
#[command(
    name = "threatsim",
    version,
    about = "Costly punishment and threat signalling simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replicator field on a barycentric lattice (phase.csv)
    Phase(Layer),
    /// RK4 replicator trajectory (trajectory.csv)
    Trajectory(Layer),
    /// Closed-form and numeric rest points with stability (restpoints.csv)
    Restpoints(Layer),
    /// Agent-based runs, one row per generation (abm_timeseries.csv)
    Abm(Layer),
    /// Parameter sweep over ABM ensembles (sweep.csv)
    Sweep(Layer),
    /// Sequential-encounter Monte Carlo check of finite payoffs (oracle.csv)
    Oracle(Layer),
}

impl Command {
    pub fn split(self) -> (CommandKind, Layer) {
        match self {
            Command::Phase(l) => (CommandKind::Phase, l),
            Command::Trajectory(l) => (CommandKind::Trajectory, l),
            Command::Restpoints(l) => (CommandKind::Restpoints, l),
            Command::Abm(l) => (CommandKind::Abm, l),
            Command::Sweep(l) => (CommandKind::Sweep, l),
            Command::Oracle(l) => (CommandKind::Oracle, l),
        }
    }
}

/// Resolves and runs an already parsed command line.
pub fn execute(cli: Cli) -> Result<Vec<PathBuf>> {
    let (kind, flags) = cli.command.split();
    let cfg = resolve(kind, flags)?;
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| commands::dispatch(&cfg)),
        None => commands::dispatch(&cfg),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Result<Vec<PathBuf>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    execute(Cli::try_parse_from(args)?)
}
