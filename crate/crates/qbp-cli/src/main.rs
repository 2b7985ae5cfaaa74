// Copyright 2026 The qbp Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! `qbp`: experiment driver for quantum belief-propagation decoding.
//!
//! Subcommands: `bp-sim`, `polar-construct`, `polar-sim`, `adc`, `selftest`.
//! Exit codes: 0 success, 1 invariant/tolerance failure, 2 usage/parse error.

mod adc_cmd;
mod bp_sim;
mod config;
mod output;
mod polar_cmd;
mod selftest;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, malformed inputs. Exit code 2.
    Usage(String),
    /// A numerical invariant or tolerance check failed. Exit code 1.
    Tolerance(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn tolerance(msg: impl Into<String>) -> Self {
        CliError::Tolerance(msg.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Tolerance(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qbp",
    version,
    about = "Belief-propagation decoding of pure-state channels: simulations, polar codes, amplitude-damping rates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; values may also come from a JSON config
/// file (`--config`), with flags taking precedence.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// JSON config file with the same keys as the long flags
    #[arg(long, global = true)]
    config: Option<String>,
    /// Factor-graph file ({"n": .., "checks": [[..]]})
    #[arg(long)]
    graph: Option<String>,
    /// Pure-state channel angle in radians
    #[arg(long)]
    theta: Option<f64>,
    /// Amplitude damping probability
    #[arg(long)]
    gamma: Option<f64>,
    /// Input weight on |0> for the damping channel
    #[arg(long)]
    p: Option<f64>,
    /// Polar block length (power of two)
    #[arg(long)]
    n: Option<usize>,
    /// Number of information bits
    #[arg(long)]
    k: Option<usize>,
    /// Monte Carlo trials (or construction samples)
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; per-trial streams derive from (seed, trial)
    #[arg(long)]
    seed: Option<u64>,
    /// Polarization threshold
    #[arg(long)]
    threshold: Option<f64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
    /// Sequential decoding order
    #[arg(long, value_parser = ["ascending", "given"])]
    order: Option<String>,
    /// Explicit bit order for --order given, e.g. "3,1,2,4"
    #[arg(long)]
    perm: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Per-bit decoder simulation on a tree factor graph (empirical vs exact
    /// vs oracle error); --sequential switches to block-error columns
    BpSim {
        #[command(flatten)]
        common: CommonArgs,
        /// Simulate sequential decoding of all bits instead of per-bit errors
        #[arg(long)]
        sequential: bool,
    },
    /// Monte Carlo polar-code construction (index, eps, stderr)
    PolarConstruct {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the constructed code as JSON
        #[arg(long)]
        code_out: Option<String>,
    },
    /// Successive-cancellation block-error simulation
    PolarSim {
        #[command(flatten)]
        common: CommonArgs,
        /// Load a constructed code from JSON instead of constructing inline
        #[arg(long)]
        code: Option<String>,
        /// Construction samples when constructing inline
        #[arg(long, default_value_t = 10_000)]
        construct_samples: usize,
    },
    /// Rate/capacity sweeps for the amplitude damping channel
    Adc {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the full invariant suite and report pass/fail per check
    Selftest {
        #[command(flatten)]
        common: CommonArgs,
        /// Deliberately perturb a U_* entry to prove the checks can fail
        #[arg(long, value_parser = ["u-var"])]
        inject_fault: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BpSim { common, sequential } => bp_sim::run(&common, sequential),
        Command::PolarConstruct { common, code_out } => {
            polar_cmd::run_construct(&common, code_out.as_deref())
        }
        Command::PolarSim {
            common,
            code,
            construct_samples,
        } => polar_cmd::run_sim(&common, code.as_deref(), construct_samples),
        Command::Adc { common } => adc_cmd::run(&common),
        Command::Selftest {
            common,
            inject_fault,
        } => selftest::run(&common, inject_fault.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Tolerance(msg)) => {
            eprintln!("tolerance failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
