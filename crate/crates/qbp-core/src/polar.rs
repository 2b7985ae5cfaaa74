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

//! Polar codes for the pure-state channel.
//!
//! The encoder is `x = u F^(x)m` over GF(2) with `F = [[1,0],[1,1]]` acting on
//! row vectors, in natural bit order (no bit-reversal permutation); the first
//! input is the fully check-convolved (worst) synthesized channel and the last
//! is the fully variable-convolved (best) one. Construction samples
//! synthesized-channel angle trajectories, and successive cancellation runs
//! the coherent message-passing circuit of each synthesized channel with
//! previously decided bits folded in as sigma_z side-information corrections.

use crate::channel::{check_convolve, helstrom_error, holevo, var_convolve, PureStateChannel};
use crate::decoder::{CoherentCircuit, DecoderCircuit, DecoderError, Step};
use crate::fmt::sig17;
use crate::seeding::trial_rng;
use crate::statevec::{Basis, GateKind, GateSpec, StateError, StateVector};
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Full-statevector limit for successive cancellation.
pub const SC_LIMIT: usize = 16;

/// Exact-enumeration limit for SC block error.
pub const SC_EXACT_LIMIT: usize = 8;

/// Minimum Monte Carlo sample count for construction.
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Error, PartialEq)]
pub enum PolarError {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("k = {k} exceeds N = {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("{0} samples are below the minimum {MIN_SAMPLES}")]
    TooFewSamples(usize),
    #[error("channel index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("N = {n} exceeds the statevector limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// A polar code: block length, frozen index set (1-based), frozen values
/// all zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    n: usize,
    frozen: Vec<usize>,
}

impl PolarCode {
    /// Build from a frozen set; indices are deduplicated and sorted.
    pub fn new(n: usize, mut frozen: Vec<usize>) -> Result<Self, PolarError> {
        if n == 0 || n & (n - 1) != 0 {
            return Err(PolarError::NotPowerOfTwo(n));
        }
        frozen.sort_unstable();
        frozen.dedup();
        if frozen.iter().any(|&i| i == 0 || i > n) {
            return Err(PolarError::IndexOutOfRange {
                index: *frozen.iter().find(|&&i| i == 0 || i > n).unwrap(),
                n,
            });
        }
        Ok(Self { n, frozen })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.frozen.len()
    }

    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn is_frozen(&self, index: usize) -> bool {
        self.frozen.binary_search(&index).is_ok()
    }

    /// Information-bit indices, ascending.
    pub fn info_indices(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| !self.is_frozen(i)).collect()
    }
}

/// Polar transform `x = u F^(x)m` in natural order, by butterfly stages.
pub fn polar_encode(u: &[u8]) -> Result<Vec<u8>, PolarError> {
    let n = u.len();
    if n == 0 || n & (n - 1) != 0 {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    let mut x: Vec<u8> = u.iter().map(|&b| b & 1).collect();
    let mut h = 1;
    while h < n {
        let mut i = 0;
        while i < n {
            for j in i..i + h {
                x[j] ^= x[j + h];
            }
            i += 2 * h;
        }
        h *= 2;
    }
    Ok(x)
}

/// One step of a synthesized-channel trajectory, in post-order over the
/// combining tree (each step merges two independently sampled copies of the
/// half-length channel).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryStep {
    /// Variable (better) step: overlaps multiply deterministically.
    Var,
    /// Check (worse) step: the sampled outcome and its probability.
    Check { outcome: u8, probability: f64 },
}

/// A sampled angle trajectory of a synthesized channel.
///
/// `steps` records the merges of the combining tree in post-order; replaying
/// them against the base channel reproduces `final_channel` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTrajectory {
    bits: Vec<u8>,
    pub steps: Vec<TrajectoryStep>,
    pub final_channel: PureStateChannel,
}

impl AngleTrajectory {
    pub fn final_theta(&self) -> f64 {
        self.final_channel.theta()
    }

    /// Recompute the final channel by replaying the recorded steps from the
    /// base channel.
    pub fn replay(&self, w: PureStateChannel) -> PureStateChannel {
        fn rec<'a, I: Iterator<Item = &'a TrajectoryStep>>(
            bits: &[u8],
            w: PureStateChannel,
            steps: &mut I,
        ) -> PureStateChannel {
            match bits.split_last() {
                None => w,
                Some((_, inner)) => {
                    let a = rec(inner, w, steps);
                    let b = rec(inner, w, steps);
                    match steps.next().expect("step list matches tree") {
                        TrajectoryStep::Var => var_convolve(a, b),
                        TrajectoryStep::Check { outcome, .. } => {
                            check_convolve(a, b).branch(*outcome)
                        }
                    }
                }
            }
        }
        rec(&self.bits, w, &mut self.steps.iter())
    }
}

/// Bits of `index - 1`, most significant first, for block length `n = 2^m`.
fn index_bits(index: usize, n: usize) -> Vec<u8> {
    let m = n.trailing_zeros() as usize;
    (0..m)
        .map(|l| (((index - 1) >> (m - 1 - l)) & 1) as u8)
        .collect()
}

/// Sample one angle trajectory of synthesized channel `index` (1-based) at
/// block length `n`.
///
/// Walking the bits of `index - 1` from the most significant (innermost
/// combine) to the least, a 0 bit is the check (worse) combination and a 1
/// bit the variable (better) one. Each combine merges two *independently
/// sampled* copies of the half-length channel, so check outcomes branch
/// separately in each subtree; a check merge samples its outcome with the
/// branch probability given the two incoming angles. Cost is O(n) per
/// sample; the pooled estimators in [`construct`] and [`polarization_stats`]
/// avoid that for large blocks.
pub fn sample_synthesized_angle<R: Rng + ?Sized>(
    w: PureStateChannel,
    index: usize,
    n: usize,
    rng: &mut R,
) -> Result<AngleTrajectory, PolarError> {
    if n == 0 || n & (n - 1) != 0 {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    if index == 0 || index > n {
        return Err(PolarError::IndexOutOfRange { index, n });
    }
    fn rec<R: Rng + ?Sized>(
        bits: &[u8],
        w: PureStateChannel,
        rng: &mut R,
        steps: &mut Vec<TrajectoryStep>,
    ) -> PureStateChannel {
        match bits.split_last() {
            None => w,
            Some((&outer, inner)) => {
                let a = rec(inner, w, rng, steps);
                let b = rec(inner, w, rng, steps);
                if outer == 1 {
                    steps.push(TrajectoryStep::Var);
                    var_convolve(a, b)
                } else {
                    let branches = check_convolve(a, b);
                    let outcome = if rng.gen::<f64>() < branches.p1 {
                        1u8
                    } else {
                        0u8
                    };
                    steps.push(TrajectoryStep::Check {
                        outcome,
                        probability: branches.probability(outcome),
                    });
                    branches.branch(outcome)
                }
            }
        }
    }
    let bits = index_bits(index, n);
    let mut steps = Vec::with_capacity(n - 1);
    let final_channel = rec(&bits, w, rng, &mut steps);
    Ok(AngleTrajectory {
        bits,
        steps,
        final_channel,
    })
}

/// Support cap for the exact distribution enumeration.
const EXACT_SUPPORT_LIMIT: usize = 1 << 16;

/// Exact mean Helstrom error of synthesized channel `index`, by enumerating
/// the full outcome distribution of the combining tree (identical overlap
/// values are merged, so the worst-case support stays manageable for the
/// small blocks this is used on).
pub fn synthesized_error_exact(
    w: PureStateChannel,
    index: usize,
    n: usize,
) -> Result<f64, PolarError> {
    Ok(synthesized_distribution_exact(w, index, n)?
        .iter()
        .map(|&(cos, p)| p * helstrom_error(PureStateChannel::from_overlap(cos).expect("valid")))
        .sum())
}

/// Exact outcome distribution of a synthesized channel as
/// `(overlap, probability)` pairs.
pub fn synthesized_distribution_exact(
    w: PureStateChannel,
    index: usize,
    n: usize,
) -> Result<Vec<(f64, f64)>, PolarError> {
    if n == 0 || n & (n - 1) != 0 {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    if index == 0 || index > n {
        return Err(PolarError::IndexOutOfRange { index, n });
    }
    if n > 16 {
        return Err(PolarError::TooLarge { n, limit: 16 });
    }
    use std::collections::BTreeMap;
    fn rec(bits: &[u8], w: PureStateChannel) -> Result<Vec<(f64, f64)>, PolarError> {
        match bits.split_last() {
            None => Ok(vec![(w.overlap(), 1.0)]),
            Some((&outer, inner)) => {
                let half = rec(inner, w)?;
                let mut acc: BTreeMap<u64, (f64, f64)> = BTreeMap::new();
                let mut push = |cos: f64, p: f64| {
                    let entry = acc.entry(cos.to_bits()).or_insert((cos, 0.0));
                    entry.1 += p;
                };
                for &(ca, pa) in &half {
                    let a = PureStateChannel::from_overlap(ca).expect("valid");
                    for &(cb, pb) in &half {
                        let b = PureStateChannel::from_overlap(cb).expect("valid");
                        let joint = pa * pb;
                        if outer == 1 {
                            push(var_convolve(a, b).overlap(), joint);
                        } else {
                            let branches = check_convolve(a, b);
                            for outcome in [0u8, 1u8] {
                                let p = branches.probability(outcome);
                                if p > 0.0 {
                                    push(branches.branch(outcome).overlap(), joint * p);
                                }
                            }
                        }
                    }
                }
                if acc.len() > EXACT_SUPPORT_LIMIT {
                    return Err(PolarError::TooLarge {
                        n: acc.len(),
                        limit: EXACT_SUPPORT_LIMIT,
                    });
                }
                Ok(acc.into_values().collect())
            }
        }
    }
    rec(&index_bits(index, n), w)
}

/// Monte Carlo density evolution for one synthesized channel: a pool of
/// overlap samples is advanced level by level, each new sample combining two
/// independently drawn members of the previous pool. Marginally every pool
/// entry follows the exact outcome distribution; cost is O(pool * log n).
fn evolve_pool<R: Rng + ?Sized>(
    w: PureStateChannel,
    index: usize,
    n: usize,
    pool_size: usize,
    rng: &mut R,
) -> Vec<f64> {
    let mut pool = vec![w.overlap(); pool_size];
    let mut next = vec![0.0f64; pool_size];
    for &bit in &index_bits(index, n) {
        for slot in next.iter_mut() {
            // the two copies must come from distinct pool members
            let ai = rng.gen_range(0..pool_size);
            let bi = if pool_size > 1 {
                (ai + 1 + rng.gen_range(0..pool_size - 1)) % pool_size
            } else {
                ai
            };
            let a = pool[ai];
            let b = pool[bi];
            let ca = PureStateChannel::from_overlap(a).expect("valid");
            let cb = PureStateChannel::from_overlap(b).expect("valid");
            *slot = if bit == 1 {
                var_convolve(ca, cb).overlap()
            } else {
                let branches = check_convolve(ca, cb);
                let outcome = if rng.gen::<f64>() < branches.p1 {
                    1u8
                } else {
                    0u8
                };
                branches.branch(outcome).overlap()
            };
        }
        std::mem::swap(&mut pool, &mut next);
    }
    pool
}

/// Monte Carlo estimate of one synthesized channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelEstimate {
    pub index: usize,
    pub eps: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Estimate every synthesized channel by Monte Carlo and freeze the `N - k`
/// indices with the largest mean Helstrom error. Deterministic under a fixed
/// seed; ties are broken by leaving the lower index unfrozen.
pub fn construct(
    w: PureStateChannel,
    n: usize,
    samples: usize,
    k: usize,
    seed: u64,
) -> Result<(PolarCode, Vec<ChannelEstimate>), PolarError> {
    if n == 0 || n & (n - 1) != 0 {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    if k > n {
        return Err(PolarError::KTooLarge { k, n });
    }
    if samples < MIN_SAMPLES {
        return Err(PolarError::TooFewSamples(samples));
    }
    let estimates: Vec<ChannelEstimate> = (1..=n)
        .into_par_iter()
        .map(|index| {
            let mut rng = trial_rng(seed, index as u64);
            let pool = evolve_pool(w, index, n, samples, &mut rng);
            let mut sum = 0.0f64;
            let mut sum_sq = 0.0f64;
            for &cos in &pool {
                let e = helstrom_error(PureStateChannel::from_overlap(cos).expect("valid"));
                sum += e;
                sum_sq += e * e;
            }
            let mean = sum / samples as f64;
            let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
            ChannelEstimate {
                index,
                eps: mean,
                stderr: (var / samples as f64).sqrt(),
                samples,
            }
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        estimates[b]
            .eps
            .partial_cmp(&estimates[a].eps)
            .expect("finite eps")
            .then(estimates[b].index.cmp(&estimates[a].index))
    });
    let frozen: Vec<usize> = order[..n - k].iter().map(|&i| estimates[i].index).collect();
    Ok((PolarCode::new(n, frozen)?, estimates))
}

/// Polarization summary at a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationStats {
    pub threshold: f64,
    pub fraction_good: f64,
    pub chi_target: f64,
    pub indices_sampled: usize,
}

/// Fraction of synthesized channels with estimated error below `threshold`.
/// For large `n`, `index_samples` channels are drawn uniformly instead of
/// sweeping all of them.
pub fn polarization_stats(
    w: PureStateChannel,
    n: usize,
    samples_per_index: usize,
    threshold: f64,
    index_samples: Option<usize>,
    seed: u64,
) -> Result<PolarizationStats, PolarError> {
    if n == 0 || n & (n - 1) != 0 {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    let indices: Vec<usize> = match index_samples {
        None => (1..=n).collect(),
        Some(count) => {
            let mut rng = trial_rng(seed, u64::MAX);
            (0..count).map(|_| rng.gen_range(1..=n)).collect()
        }
    };
    let good: usize = indices
        .par_iter()
        .enumerate()
        .map(|(pos, &index)| {
            let mut rng = trial_rng(seed, pos as u64);
            let pool = evolve_pool(w, index, n, samples_per_index, &mut rng);
            let sum: f64 = pool
                .iter()
                .map(|&cos| helstrom_error(PureStateChannel::from_overlap(cos).expect("valid")))
                .sum();
            usize::from(sum / (samples_per_index as f64) < threshold)
        })
        .sum();
    Ok(PolarizationStats {
        threshold,
        fraction_good: good as f64 / indices.len() as f64,
        chi_target: holevo(w).chi,
        indices_sampled: indices.len(),
    })
}

/// Merge-step circuit of synthesized channel `index` (1-based): the block
/// splits into even/odd interleaved halves, each carrying an independent copy
/// of the half-length channel, and the outermost step is a check merge for
/// the first input of a pair or a variable merge for the second. The message
/// always compresses onto wire 0.
pub fn synthesized_circuit(
    w: PureStateChannel,
    index: usize,
    n: usize,
) -> Result<DecoderCircuit, PolarError> {
    if n == 0 || n & (n - 1) != 0 {
        return Err(PolarError::NotPowerOfTwo(n));
    }
    if index == 0 || index > n {
        return Err(PolarError::IndexOutOfRange { index, n });
    }
    fn rec(bits: &[u8], wires: &[usize], steps: &mut Vec<Step>) -> usize {
        match bits.split_last() {
            None => wires[0],
            Some((&outer, inner)) => {
                let evens: Vec<usize> = wires.iter().copied().step_by(2).collect();
                let odds: Vec<usize> = wires.iter().copied().skip(1).step_by(2).collect();
                let keep = rec(inner, &evens, steps);
                let drop = rec(inner, &odds, steps);
                steps.push(if outer == 0 {
                    Step::CheckMerge { keep, drop }
                } else {
                    Step::VarMerge { keep, drop }
                });
                keep
            }
        }
    }
    let bits = index_bits(index, n);
    let wires: Vec<usize> = (0..n).collect();
    let mut steps = Vec::new();
    let root = rec(&bits, &wires, &mut steps);
    Ok(DecoderCircuit::from_steps(n, root, w.theta(), steps)?)
}

/// Successive-cancellation decoder with precomputed per-bit circuits.
pub struct ScDecoder {
    code: PolarCode,
    circuits: Vec<Option<CoherentCircuit>>,
    root_wires: Vec<usize>,
}

impl ScDecoder {
    pub fn new(code: &PolarCode, w: PureStateChannel) -> Result<Self, PolarError> {
        if code.n() > SC_LIMIT {
            return Err(PolarError::TooLarge {
                n: code.n(),
                limit: SC_LIMIT,
            });
        }
        let mut circuits = Vec::with_capacity(code.n());
        let mut root_wires = Vec::with_capacity(code.n());
        for index in 1..=code.n() {
            if code.is_frozen(index) {
                circuits.push(None);
                root_wires.push(0);
            } else {
                let circ = synthesized_circuit(w, index, code.n())?;
                root_wires.push(circ.root_wire());
                circuits.push(Some(circ.coherent()?));
            }
        }
        Ok(Self {
            code: code.clone(),
            circuits,
            root_wires,
        })
    }

    /// sigma_z mask folding decided bits into the remaining problem: the
    /// encoder image of the decided prefix padded with zeros.
    fn side_info_mask(&self, decided: &[u8], upto: usize) -> Vec<u8> {
        let mut u = vec![0u8; self.code.n()];
        u[..upto].copy_from_slice(&decided[..upto]);
        polar_encode(&u).expect("n validated")
    }

    fn apply_mask(state: &mut StateVector, mask: &[u8]) -> Result<(), StateError> {
        for (wire, &bit) in mask.iter().enumerate() {
            if bit == 1 {
                state.apply_gate(&GateSpec::new(GateKind::PauliZ, vec![wire]))?;
            }
        }
        Ok(())
    }

    /// Decode all inputs in ascending order. Frozen bits are forced to zero;
    /// each information bit is measured through its coherent circuit and the
    /// circuit is uncomputed afterwards.
    pub fn decode<R: Rng + ?Sized>(
        &self,
        outputs: &StateVector,
        rng: &mut R,
    ) -> Result<Vec<u8>, PolarError> {
        let n = self.code.n();
        if outputs.num_qubits() != n {
            return Err(PolarError::Decoder(DecoderError::DimensionMismatch {
                got: outputs.num_qubits(),
                need: n,
            }));
        }
        let mut state = outputs.clone();
        let mut u = vec![0u8; n];
        for index in 1..=n {
            let Some(circuit) = &self.circuits[index - 1] else {
                continue;
            };
            let mask = self.side_info_mask(&u, index - 1);
            Self::apply_mask(&mut state, &mask)?;
            circuit.apply(&mut state)?;
            let rec = state.measure(self.root_wires[index - 1], Basis::X, rng)?;
            u[index - 1] = rec.outcome;
            circuit.apply_inverse(&mut state)?;
            Self::apply_mask(&mut state, &mask)?;
        }
        Ok(u)
    }

    /// Exact block error by enumerating information vectors and every
    /// measurement outcome path (success requires following the correct one).
    pub fn exact_block_error(&self, w: PureStateChannel) -> Result<f64, PolarError> {
        let n = self.code.n();
        if n > SC_EXACT_LIMIT {
            return Err(PolarError::TooLarge {
                n,
                limit: SC_EXACT_LIMIT,
            });
        }
        let info = self.code.info_indices();
        let mut success = 0.0f64;
        let words = 1usize << info.len();
        for w_idx in 0..words {
            let mut u = vec![0u8; n];
            for (pos, &index) in info.iter().enumerate() {
                u[index - 1] = ((w_idx >> pos) & 1) as u8;
            }
            let x = polar_encode(&u)?;
            let outputs = StateVector::channel_outputs(w.theta(), &x).map_err(PolarError::State)?;
            success += self.correct_path_probability(&outputs, &u, 1)?;
        }
        Ok(1.0 - success / words as f64)
    }

    fn correct_path_probability(
        &self,
        state: &StateVector,
        u: &[u8],
        index: usize,
    ) -> Result<f64, PolarError> {
        if index > self.code.n() {
            return Ok(1.0);
        }
        let Some(circuit) = &self.circuits[index - 1] else {
            return self.correct_path_probability(state, u, index + 1);
        };
        let mut st = state.clone();
        let mask = self.side_info_mask(u, index - 1);
        Self::apply_mask(&mut st, &mask)?;
        circuit.apply(&mut st)?;
        let root = self.root_wires[index - 1];
        let (p0, p1) = st.outcome_probabilities(root, Basis::X)?;
        let want = u[index - 1];
        let p = if want == 0 { p0 } else { p1 };
        if p < crate::statevec::BRANCH_TOL {
            return Ok(0.0);
        }
        st.project(root, Basis::X, want)?;
        circuit.apply_inverse(&mut st)?;
        Self::apply_mask(&mut st, &mask)?;
        Ok(p * self.correct_path_probability(&st, u, index + 1)?)
    }
}

/// One-shot successive cancellation decode (builds the per-bit circuits
/// internally; use [`ScDecoder`] for repeated trials).
pub fn sc_decode<R: Rng + ?Sized>(
    outputs: &StateVector,
    code: &PolarCode,
    w: PureStateChannel,
    rng: &mut R,
) -> Result<Vec<u8>, PolarError> {
    ScDecoder::new(code, w)?.decode(outputs, rng)
}

/// Monte Carlo SC block-error count over `trials` random information words,
/// deterministic per `(seed, trial)` and order-independent.
pub fn sc_block_errors_mc(
    code: &PolarCode,
    w: PureStateChannel,
    trials: u64,
    seed: u64,
) -> Result<u64, PolarError> {
    let decoder = ScDecoder::new(code, w)?;
    let info = code.info_indices();
    let errors = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut u = vec![0u8; code.n()];
            for &index in &info {
                u[index - 1] = rng.gen_range(0..=1u8);
            }
            let x = polar_encode(&u).expect("validated");
            let outputs = StateVector::channel_outputs(w.theta(), &x).expect("validated angle");
            let decoded = decoder
                .decode(&outputs, &mut rng)
                .expect("dimensions match");
            u64::from(decoded != u)
        })
        .sum();
    Ok(errors)
}

/// Deterministic JSON for a constructed code:
/// `{"N":..,"theta":..,"frozen":[..],"eps":[..]}`.
pub fn construction_json(code: &PolarCode, theta: f64, estimates: &[ChannelEstimate]) -> String {
    let frozen = code
        .frozen()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let eps = estimates
        .iter()
        .map(|e| sig17(e.eps))
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"N\":{},\"theta\":{},\"frozen\":[{}],\"eps\":[{}]}}",
        code.n(),
        sig17(theta),
        frozen,
        eps
    )
}
