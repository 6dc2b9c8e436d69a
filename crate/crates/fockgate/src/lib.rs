// Copyright 2026 The fockgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end for the `fockgate-core` simulator.
//!
//! Subcommands: `truth-table`, `error-budget`, `scan` and `verify`. Each
//! renders a human-readable table, CSV, or a JSON document with `meta` and
//! `data` sections.

pub mod commands;
pub mod config;
pub mod render;
pub mod verify;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use crate::commands::Report;
use crate::config::{load, CommonArgs, PartialConfig};

#[derive(Debug, Parser)]
#[command(name = "fockgate", version, about = "Post-selected photonic phase gate simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Post-selected truth table in the encoded qubit basis.
    TruthTable {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Success / loss / bunching probabilities for each basis input.
    ErrorBudget {
        #[command(flatten)]
        common: CommonArgs,
        /// Extra input row: VV, VH, HV, HH or 00..11 in the chosen encoding.
        #[arg(long, conflicts_with = "amplitudes")]
        input: Option<String>,
        /// Extra input row given as four comma-separated complex amplitudes.
        #[arg(long, allow_hyphen_values = true)]
        amplitudes: Option<String>,
    },
    /// Number-conserving beam-splitter amplitudes over a reflectivity grid.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        /// `start:stop:step` or a comma-separated list; values may be p/q.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Run the invariant suite; exits non-zero if any check fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Output of one invocation, ready to be written.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub out: Option<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let (common, extra) = match &cli.command {
        Command::TruthTable { common } | Command::Verify { common } => (common, PartialConfig::default()),
        Command::ErrorBudget { common, input, amplitudes } => (
            common,
            PartialConfig {
                input: input.clone(),
                amplitudes: amplitudes.clone(),
                ..Default::default()
            },
        ),
        Command::Scan { common, grid } => (
            common,
            PartialConfig {
                grid: grid.clone(),
                ..Default::default()
            },
        ),
    };
    let config = load(common, extra)?;
    let report = match &cli.command {
        Command::TruthTable { .. } => commands::truth_table(&config)?,
        Command::ErrorBudget { .. } => commands::error_budget(&config)?,
        Command::Scan { .. } => commands::scan(&config)?,
        Command::Verify { .. } => commands::verify(&config)?,
    };
    Ok(Outcome {
        report,
        out: config.out.clone(),
        warnings: config.warnings.clone(),
    })
}

/// Writes the report to its destination (file or stdout).
pub fn emit(outcome: &Outcome) -> Result<()> {
    match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.report.body)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", outcome.report.body);
            Ok(())
        }
    }
}
