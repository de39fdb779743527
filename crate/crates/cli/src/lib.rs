//! Batch experiments over `skewshift-core` with versioned CSV and JSON
//! output.
//!
//! Every run is a pure function of its arguments and seed: the header of
//! each output file echoes both, and parallel sections reduce in a fixed
//! order, so the bytes do not depend on the worker count.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;
pub mod parse;

use std::ffi::OsString;

use anyhow::Result;
use clap::Parser;

pub use args::Cli;
pub use output::Outcome;

/// Exit status for a run that finished but left a hypothesis regime.
pub const EXIT_REGIME: i32 = 2;
/// Exit status for bad input.
pub const EXIT_INPUT: i32 = 1;

/// Parses `argv` after splicing in config entries for the chosen command.
pub fn parse_args(argv: Vec<OsString>) -> Result<Cli> {
    let argv = config::inject(argv)?;
    Ok(Cli::try_parse_from(argv)?)
}

/// Runs a parsed command inside the worker pool and writes its output.
/// Returns the process exit status.
pub fn execute(cli: &Cli) -> Result<i32> {
    let workers = parallel::workers_from_env()?;
    let outcome = parallel::install(workers, || commands::run(cli))??;
    output::emit(cli, &outcome)?;
    for note in &outcome.notes {
        eprintln!("note: {note}");
    }
    Ok(if outcome.regime_violation { EXIT_REGIME } else { 0 })
}
