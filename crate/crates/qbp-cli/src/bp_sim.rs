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

//! `bp-sim`: Monte Carlo decoder simulation on a tree factor graph.
//!
//! Default mode emits one row per bit with the empirical, exact, and oracle
//! error; `--sequential` decodes whole words instead and emits block-error
//! rows. Empirical rates further than 4 sigma from the exact value are a
//! tolerance failure (exit code 1).

use crate::config::{resolve, Resolved};
use crate::output::{sig17, Csv};
use crate::{CliError, CommonArgs};
use qbp_core::channel::PureStateChannel;
use qbp_core::decoder;
use qbp_core::graph::{self, FactorGraph};
use qbp_core::oracle;
use qbp_core::seeding::trial_rng;
use qbp_core::statevec::StateVector;
use rand::Rng;
use rayon::prelude::*;

fn load_graph(cfg: &Resolved) -> Result<FactorGraph, CliError> {
    let path = cfg.require_graph()?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read graph {path}: {e}")))?;
    let g =
        graph::parse_graph(&text).map_err(|e| CliError::usage(format!("bad graph {path}: {e}")))?;
    graph::assert_tree(&g).map_err(|e| CliError::usage(format!("graph {path}: {e}")))?;
    Ok(g)
}

pub fn run(args: &CommonArgs, sequential: bool) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    let g = load_graph(&cfg)?;
    let theta = cfg.require_theta()?;
    let w = PureStateChannel::from_angle(theta).map_err(|e| CliError::usage(e.to_string()))?;
    if g.n_vars() > oracle::QUANTUM_LIMIT {
        return Err(CliError::usage(format!(
            "bp-sim needs n <= {} for the oracle columns, got {}",
            oracle::QUANTUM_LIMIT,
            g.n_vars()
        )));
    }
    let trials = cfg.trials_or(10_000).max(1);
    let words = graph::enumerate_codewords(&g).map_err(|e| CliError::usage(e.to_string()))?;

    if sequential {
        run_sequential(&cfg, &g, w, &words, trials)
    } else {
        run_per_bit(&cfg, &g, w, &words, trials)
    }
}

fn run_per_bit(
    cfg: &Resolved,
    g: &FactorGraph,
    w: PureStateChannel,
    words: &[Vec<u8>],
    trials: u64,
) -> Result<(), CliError> {
    let mut csv = Csv::new(&[
        "bit_index",
        "theta",
        "trials",
        "empirical_err",
        "exact_err",
        "oracle_err",
    ]);
    let mut flagged = Vec::new();
    for bit in 1..=g.n_vars() {
        let circuit =
            decoder::build_destructive(g, bit, w).map_err(|e| CliError::usage(e.to_string()))?;
        let exact = circuit.exact_bit_error();
        let oracle_err = match oracle::bit_hypothesis_states(g, w, bit) {
            Ok(pair) => {
                oracle::optimal_bit_error(&pair)
                    .map_err(|e| CliError::usage(e.to_string()))?
                    .optimal_error
            }
            Err(oracle::OracleError::ConstantBit(_)) => 0.0,
            Err(e) => return Err(CliError::usage(e.to_string())),
        };
        let errors: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(cfg.seed, ((bit as u64) << 40) | t);
                let word = &words[rng.gen_range(0..words.len())];
                let outputs =
                    StateVector::channel_outputs(w.theta(), word).expect("validated angle");
                let est = circuit
                    .decode_bit_destructive(&outputs, &mut rng)
                    .expect("dimensions match");
                u64::from(est.bit != word[bit - 1])
            })
            .sum();
        let empirical = errors as f64 / trials as f64;
        let sigma = (exact.max(1.0 / trials as f64) * (1.0 - exact) / trials as f64).sqrt();
        if (empirical - exact).abs() > 4.0 * sigma {
            flagged.push(format!(
                "bit {bit}: empirical {empirical} vs exact {exact} (4 sigma = {})",
                4.0 * sigma
            ));
        }
        csv.row(&[
            bit.to_string(),
            sig17(w.theta()),
            trials.to_string(),
            sig17(empirical),
            sig17(exact),
            sig17(oracle_err),
        ]);
    }
    csv.emit(cfg.out.as_deref())?;
    if flagged.is_empty() {
        Ok(())
    } else {
        Err(CliError::tolerance(flagged.join("; ")))
    }
}

fn run_sequential(
    cfg: &Resolved,
    g: &FactorGraph,
    w: PureStateChannel,
    words: &[Vec<u8>],
    trials: u64,
) -> Result<(), CliError> {
    let n = g.n_vars();
    let order = cfg.decode_order(n)?;
    let gao: f64 = (1..=n)
        .map(|bit| decoder::exact_bit_error(g, bit, w).map_err(|e| CliError::usage(e.to_string())))
        .sum::<Result<f64, _>>()?
        * 4.0;
    let gao = gao.min(1.0);
    let errors: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let word = &words[rng.gen_range(0..words.len())];
            let outputs = StateVector::channel_outputs(w.theta(), word).expect("validated angle");
            let result = decoder::sequential_decode(&outputs, g, w, &order, &mut rng)
                .expect("validated inputs");
            u64::from(result.bits != *word)
        })
        .sum();
    let block_err = errors as f64 / trials as f64;
    let mut csv = Csv::new(&["n", "theta", "trials", "block_err", "gao_bound"]);
    csv.row(&[
        n.to_string(),
        sig17(w.theta()),
        trials.to_string(),
        sig17(block_err),
        sig17(gao),
    ]);
    csv.emit(cfg.out.as_deref())?;
    let p_hat = block_err.max(1.0 / trials as f64);
    let sigma = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    if block_err > gao + 3.0 * sigma {
        return Err(CliError::tolerance(format!(
            "sequential block error {block_err} exceeds Gao bound {gao} + 3 sigma"
        )));
    }
    Ok(())
}
