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

//! Config resolution: command-line flags layered over an optional JSON
//! config file; flags win.

use crate::{CliError, CommonArgs};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    graph: Option<String>,
    theta: Option<f64>,
    gamma: Option<f64>,
    p: Option<f64>,
    n: Option<usize>,
    k: Option<usize>,
    trials: Option<u64>,
    seed: Option<u64>,
    threshold: Option<f64>,
    out: Option<String>,
    order: Option<String>,
    perm: Option<String>,
}

/// Fully resolved experiment parameters; subcommands pull what they need and
/// reject what is missing.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub graph: Option<String>,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub threshold: Option<f64>,
    pub out: Option<String>,
    pub order: String,
    pub perm: Option<String>,
}

pub fn resolve(args: &CommonArgs) -> Result<Resolved, CliError> {
    let file: ConfigFile = match &args.config {
        None => ConfigFile::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {path}: {e}")))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("malformed config {path}: {e}")))?
        }
    };
    let order = args
        .order
        .clone()
        .or(file.order)
        .unwrap_or_else(|| "ascending".to_string());
    if order != "ascending" && order != "given" {
        return Err(CliError::usage(format!(
            "order must be 'ascending' or 'given', got '{order}'"
        )));
    }
    Ok(Resolved {
        graph: args.graph.clone().or(file.graph),
        theta: args.theta.or(file.theta),
        gamma: args.gamma.or(file.gamma),
        p: args.p.or(file.p),
        n: args.n.or(file.n),
        k: args.k.or(file.k),
        trials: args.trials.or(file.trials),
        seed: args.seed.or(file.seed).unwrap_or(0),
        threshold: args.threshold.or(file.threshold),
        out: args.out.clone().or(file.out),
        order,
        perm: args.perm.clone().or(file.perm),
    })
}

impl Resolved {
    pub fn require_theta(&self) -> Result<f64, CliError> {
        self.theta
            .ok_or_else(|| CliError::usage("--theta is required"))
    }

    pub fn require_graph(&self) -> Result<&str, CliError> {
        self.graph
            .as_deref()
            .ok_or_else(|| CliError::usage("--graph is required"))
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::usage("--n is required"))
    }

    pub fn require_k(&self) -> Result<usize, CliError> {
        self.k.ok_or_else(|| CliError::usage("--k is required"))
    }

    pub fn trials_or(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }

    /// Decode order for an `n`-bit code: ascending, or the --perm list when
    /// --order given.
    pub fn decode_order(&self, n: usize) -> Result<Vec<usize>, CliError> {
        if self.order == "ascending" {
            return Ok((1..=n).collect());
        }
        let perm = self
            .perm
            .as_deref()
            .ok_or_else(|| CliError::usage("--order given requires --perm"))?;
        let order: Vec<usize> = perm
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::usage(format!("bad --perm entry '{s}'")))
            })
            .collect::<Result<_, _>>()?;
        let mut seen = vec![false; n + 1];
        if order.len() != n
            || order
                .iter()
                .any(|&j| j == 0 || j > n || std::mem::replace(&mut seen[j], true))
        {
            return Err(CliError::usage(format!(
                "--perm must be a permutation of 1..={n}"
            )));
        }
        Ok(order)
    }
}
