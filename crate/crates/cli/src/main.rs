// Copyright 2026 memxfer Contributors
// SPDX-License-Identifier: Apache-2.0

//! `memxfer`: verify, bound, optimize and tabulate matrix-element transfer
//! channels. Exit status 0 on success, 1 when a check fails or no feasible
//! point is found, 2 on usage or configuration errors.

mod commands;
mod config;
mod error;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Flags;
use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "memxfer", version, about = "Matrix-element transfer channels: memory bounds and optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit JSON instead of text/CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Three restarts per optimization.
    #[arg(long, global = true)]
    quick: bool,
    /// Overrides the optimizer seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; defaults to `output.path` or stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Erasure theorems, bound saturation and invariant suites.
    Verify,
    /// Closed-form bounds for the configured transfer.
    Bounds,
    /// Maximize a memory measure under the configured transfer.
    Optimize,
    /// The ancilla-dimension × accuracy grid as CSV.
    Tables,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = ExperimentConfig::load(cli.config.as_deref())?;
    let flags = Flags { json: cli.json, quick: cli.quick, seed: cli.seed, out: cli.out };
    match cli.command {
        Command::Verify => commands::verify(cfg, &flags),
        Command::Bounds => commands::bounds(cfg, &flags).map(|_| true),
        Command::Optimize => commands::optimize(cfg, &flags).map(|_| true),
        Command::Tables => commands::tables(cfg, &flags).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
