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

//! Brute-force ground truth.
//!
//! Nothing here goes through the message-passing machinery: hypothesis states
//! are assembled over the full `2^n`-dimensional output space and discriminated
//! by eigendecomposition, classical posteriors are summed codeword by
//! codeword, and the sequential block error is enumerated outcome by outcome.
//! These are the oracles every decoder result is checked against.

use crate::channel::PureStateChannel;
use crate::decoder;
use crate::density::{DensityError, DensityOperator};
use crate::graph::{enumerate_codewords, FactorGraph, GraphError, LlrMessage};
use crate::statevec::StateVector;
use thiserror::Error;

/// Enumeration limit for quantum hypothesis states (dimension `2^n`).
pub const QUANTUM_LIMIT: usize = 12;

/// Enumeration limit for classical posteriors.
pub const CLASSICAL_LIMIT: usize = 20;

/// Enumeration limit for exact sequential block error.
pub const SEQUENTIAL_LIMIT: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{n_vars} variables exceed the oracle limit {limit}")]
    TooLarge { n_vars: usize, limit: usize },
    #[error("bit {0} is constant across the code; its error probability is 0")]
    ConstantBit(usize),
    #[error("invalid bit index {0}")]
    BadBit(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("decoder failure: {0}")]
    Decoder(String),
}

/// Two-hypothesis discrimination instance.
#[derive(Debug, Clone)]
pub struct HypothesisPair {
    pub rho0: DensityOperator,
    pub rho1: DensityOperator,
    pub prior0: f64,
}

/// How an oracle error value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    TraceNorm,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub optimal_error: f64,
    pub method: OracleMethod,
}

/// Hypothesis states for one bit of a code used over a pure-state channel:
/// `rho_b` averages the product outputs over codewords with that bit equal
/// to `b`; priors come from codeword counts. A bit constant over the code is
/// flagged instead of producing an empty hypothesis.
pub fn bit_hypothesis_states(
    graph: &FactorGraph,
    w: PureStateChannel,
    bit: usize,
) -> Result<HypothesisPair, OracleError> {
    let n = graph.n_vars();
    if n > QUANTUM_LIMIT {
        return Err(OracleError::TooLarge {
            n_vars: n,
            limit: QUANTUM_LIMIT,
        });
    }
    if bit == 0 || bit > n {
        return Err(OracleError::BadBit(bit));
    }
    let words = enumerate_codewords(graph)?;
    let theta = w.theta();
    let mut groups: [Vec<&Vec<u8>>; 2] = [Vec::new(), Vec::new()];
    for word in &words {
        groups[word[bit - 1] as usize].push(word);
    }
    if groups[0].is_empty() || groups[1].is_empty() {
        return Err(OracleError::ConstantBit(bit));
    }
    let build = |members: &[&Vec<u8>]| -> Result<DensityOperator, OracleError> {
        let weight = 1.0 / members.len() as f64;
        let mut acc: Option<DensityOperator> = None;
        for word in members {
            let state = StateVector::channel_outputs(theta, word)
                .map_err(|e| OracleError::Decoder(e.to_string()))?;
            let rho = DensityOperator::from_pure(&state).scaled(weight);
            acc = Some(match acc {
                None => rho,
                Some(prev) => prev.add(&rho),
            });
        }
        Ok(acc.expect("non-empty group"))
    };
    let rho0 = build(&groups[0])?;
    let rho1 = build(&groups[1])?;
    let prior0 = groups[0].len() as f64 / words.len() as f64;
    Ok(HypothesisPair { rho0, rho1, prior0 })
}

/// Minimum-error discrimination of a hypothesis pair:
/// `error = (1 - || p0 rho0 - p1 rho1 ||_1) / 2` via eigendecomposition.
pub fn optimal_bit_error(pair: &HypothesisPair) -> Result<OracleReport, OracleError> {
    let diff = pair
        .rho0
        .weighted_diff(pair.prior0, &pair.rho1, 1.0 - pair.prior0);
    let tn = diff.trace_norm()?;
    Ok(OracleReport {
        optimal_error: 0.5 * (1.0 - tn),
        method: OracleMethod::TraceNorm,
    })
}

/// Exact posterior LLR of one bit by summing codeword weights; the ground
/// truth for [`classical_bp`](crate::graph::classical_bp).
pub fn brute_posterior_classical(
    graph: &FactorGraph,
    llrs: &[LlrMessage],
    bit: usize,
) -> Result<LlrMessage, OracleError> {
    let n = graph.n_vars();
    if n > CLASSICAL_LIMIT {
        return Err(OracleError::TooLarge {
            n_vars: n,
            limit: CLASSICAL_LIMIT,
        });
    }
    if bit == 0 || bit > n {
        return Err(OracleError::BadBit(bit));
    }
    if llrs.len() != n {
        return Err(OracleError::Graph(GraphError::LlrCount {
            got: llrs.len(),
            need: n,
        }));
    }
    let words = enumerate_codewords(graph)?;
    // codeword weight is exp(-sum_j l_j x_j) up to a bit-independent factor
    let mut exps: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    for word in &words {
        let mut e = 0.0f64;
        for (j, &x) in word.iter().enumerate() {
            if x == 1 {
                e -= llrs[j].value();
            }
        }
        if !e.is_nan() {
            exps[word[bit - 1] as usize].push(e);
        }
    }
    let l0 = log_sum_exp(&exps[0]);
    let l1 = log_sum_exp(&exps[1]);
    let value = match (l0.is_infinite(), l1.is_infinite()) {
        (true, true) if l0 > 0.0 && l1 > 0.0 => 0.0,
        _ => l0 - l1,
    };
    Ok(LlrMessage::new(if value.is_nan() { 0.0 } else { value }).expect("finite or inf"))
}

fn log_sum_exp(exponents: &[f64]) -> f64 {
    if exponents.is_empty() {
        return f64::NEG_INFINITY;
    }
    let m = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    m + exponents.iter().map(|e| (e - m).exp()).sum::<f64>().ln()
}

/// Exact block error of the sequential bitwise decoder, enumerating the
/// uniform codeword prior and every projective outcome path with its exact
/// probability. No sampling anywhere.
pub fn sequential_exact_block_error(
    graph: &FactorGraph,
    w: PureStateChannel,
) -> Result<f64, OracleError> {
    let n = graph.n_vars();
    if n > SEQUENTIAL_LIMIT {
        return Err(OracleError::TooLarge {
            n_vars: n,
            limit: SEQUENTIAL_LIMIT,
        });
    }
    let words = enumerate_codewords(graph)?;
    let circuits: Vec<decoder::CoherentCircuit> = (1..=n)
        .map(|bit| {
            decoder::build_coherent(graph, bit, w).map_err(|e| OracleError::Decoder(e.to_string()))
        })
        .collect::<Result<_, _>>()?;

    let mut success = 0.0f64;
    for word in &words {
        let state = StateVector::channel_outputs(w.theta(), word)
            .map_err(|e| OracleError::Decoder(e.to_string()))?;
        success += correct_path_probability(&state, word, 0, &circuits)
            .map_err(|e| OracleError::Decoder(e.to_string()))?;
    }
    Ok(1.0 - success / words.len() as f64)
}

/// Probability that bits `bit..` are all decoded to the codeword values,
/// following only the correct outcome path (other paths are block errors).
fn correct_path_probability(
    state: &StateVector,
    word: &[u8],
    bit: usize,
    circuits: &[decoder::CoherentCircuit],
) -> Result<f64, crate::statevec::StateError> {
    if bit == word.len() {
        return Ok(1.0);
    }
    let mut st = state.clone();
    circuits[bit].apply(&mut st)?;
    let (p0, p1) =
        st.outcome_probabilities(circuits[bit].root_wire(), crate::statevec::Basis::X)?;
    let want = word[bit];
    let p = if want == 0 { p0 } else { p1 };
    if p < crate::statevec::BRANCH_TOL {
        return Ok(0.0);
    }
    st.project(circuits[bit].root_wire(), crate::statevec::Basis::X, want)?;
    circuits[bit].apply_inverse(&mut st)?;
    Ok(p * correct_path_probability(&st, word, bit + 1, circuits)?)
}
