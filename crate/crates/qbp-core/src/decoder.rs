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

//! Quantum message-passing decoder circuits.
//!
//! A decoding circuit is an ordered list of two-wire merge steps derived from
//! a tree schedule: a check merge is a CNOT whose dropped wire is measured in
//! the Z basis (destructively) or retained as a coherent control, and a
//! variable merge is the compression unitary `U_*` whose angles are resolved
//! from the outcomes of earlier check merges. One structure serves the
//! destructive sampler, the exact branch enumerators, and the coherent
//! promotion to a unitary `V_j`, so all three stay in lockstep.

use crate::channel::{check_convolve, helstrom_error, var_convolve, PureStateChannel};
use crate::fmt::sig17;
use crate::graph::{schedule, FactorGraph, GraphError, NodeVisit};
use crate::statevec::{
    Basis, ControlTable, GateKind, GateSpec, MeasurementRecord, StateError, StateVector, BRANCH_TOL,
};
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

/// Control tables are materialized only up to this many controls.
pub const MAX_CONTROLS: usize = 20;

/// Exact enumeration limit for [`exact_bit_error`].
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum DecoderError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("check {0} has no child variables (degree-1 check pins its variable)")]
    DegenerateCheck(usize),
    #[error("control table would need {0} controls, cap is {MAX_CONTROLS}")]
    ControlTableTooLarge(usize),
    #[error("state has {got} wires, circuit needs {need}")]
    DimensionMismatch { got: usize, need: usize },
    #[error("{n_vars} variables exceed the exact-enumeration limit {limit}")]
    TooLarge { n_vars: usize, limit: usize },
    #[error("invalid step: wire {0} reused after being dropped")]
    WireReused(usize),
    #[error("order must be a permutation of 1..={0}")]
    BadOrder(usize),
}

/// One merge step of a decoding circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// CNOT from `keep` to `drop`; `drop` is measured (or coherently kept as
    /// a control). The kept wire's channel branches on the outcome.
    CheckMerge { keep: usize, drop: usize },
    /// `U_*` on `(keep, drop)` with outcome-resolved angles; `drop` ends in
    /// `|0>`.
    VarMerge { keep: usize, drop: usize },
}

/// Adaptive decoding circuit for a single bit.
///
/// The gate list is static; variable-merge angles are resolved by replaying
/// the channel algebra against the recorded check outcomes, so the same
/// structure drives destructive sampling, exact enumeration, and the coherent
/// unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderCircuit {
    theta: f64,
    num_wires: usize,
    root_wire: usize,
    steps: Vec<Step>,
}

/// Result of estimating one bit.
#[derive(Debug, Clone)]
pub struct BitEstimate {
    pub bit: u8,
    pub branch_record: Vec<MeasurementRecord>,
    /// Helstrom error of the root measurement conditioned on the recorded
    /// branch; exact for this run.
    pub error_probability: Option<f64>,
}

/// Result of sequentially estimating every bit.
#[derive(Debug, Clone)]
pub struct SequentialResult {
    pub bits: Vec<u8>,
    pub per_bit_estimates: Vec<BitEstimate>,
    /// Noncommutative union bound `min(1, 4 sum_j eps_j)` from the exact
    /// per-bit errors.
    pub block_error_bound: f64,
}

/// Gate totals by kind, deterministic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateCount {
    pub total: usize,
    pub per_kind: BTreeMap<&'static str, usize>,
}

impl DecoderCircuit {
    /// Assemble a circuit from raw merge steps (used by the polar decoder).
    /// Wires must be in range, distinct within a step, and never reused after
    /// being dropped.
    pub fn from_steps(
        num_wires: usize,
        root_wire: usize,
        theta: f64,
        steps: Vec<Step>,
    ) -> Result<Self, DecoderError> {
        let mut dropped = vec![false; num_wires];
        for step in &steps {
            let (keep, drop) = step.wires();
            if keep >= num_wires || drop >= num_wires {
                return Err(DecoderError::State(StateError::WireOutOfRange {
                    wire: keep.max(drop),
                    num_qubits: num_wires,
                }));
            }
            if keep == drop {
                return Err(DecoderError::State(StateError::DuplicateWire(keep)));
            }
            if dropped[keep] {
                return Err(DecoderError::WireReused(keep));
            }
            if dropped[drop] {
                return Err(DecoderError::WireReused(drop));
            }
            dropped[drop] = true;
        }
        if root_wire >= num_wires || dropped[root_wire] {
            return Err(DecoderError::WireReused(root_wire));
        }
        Ok(Self {
            theta,
            num_wires,
            root_wire,
            steps,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn root_wire(&self) -> usize {
        self.root_wire
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `(step index, measured wire)` of every check merge, in order; the
    /// outcome pattern these wires produce is what the angle resolver keys on.
    pub fn branch_points(&self) -> Vec<(usize, usize)> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(i, step)| match *step {
                Step::CheckMerge { drop, .. } => Some((i, drop)),
                Step::VarMerge { .. } => None,
            })
            .collect()
    }

    /// Resolve the `(theta, theta')` parameters of every variable merge for
    /// a given check-outcome pattern (one bit per branch point, in order).
    pub fn resolve_angles(&self, outcomes: &[u8]) -> Result<Vec<(f64, f64)>, DecoderError> {
        let branch_count = self.branch_points().len();
        if outcomes.len() != branch_count {
            return Err(DecoderError::DimensionMismatch {
                got: outcomes.len(),
                need: branch_count,
            });
        }
        let mut angles =
            vec![PureStateChannel::from_angle(self.theta).expect("valid"); self.num_wires];
        let mut next_branch = 0usize;
        let mut resolved = Vec::new();
        for step in &self.steps {
            match *step {
                Step::CheckMerge { keep, drop } => {
                    let branches = check_convolve(angles[keep], angles[drop]);
                    angles[keep] = branches.branch(outcomes[next_branch]);
                    next_branch += 1;
                }
                Step::VarMerge { keep, drop } => {
                    resolved.push((angles[keep].theta(), angles[drop].theta()));
                    angles[keep] = var_convolve(angles[keep], angles[drop]);
                }
            }
        }
        Ok(resolved)
    }

    fn check_dimension(&self, state: &StateVector) -> Result<(), DecoderError> {
        if state.num_qubits() != self.num_wires {
            return Err(DecoderError::DimensionMismatch {
                got: state.num_qubits(),
                need: self.num_wires,
            });
        }
        Ok(())
    }

    /// Execute destructively, sampling check measurements, and estimate the
    /// root bit by the final X-basis (Helstrom) measurement. Outcome `+`
    /// decodes to bit 0.
    pub fn decode_bit_destructive<R: Rng + ?Sized>(
        &self,
        outputs: &StateVector,
        rng: &mut R,
    ) -> Result<BitEstimate, DecoderError> {
        self.check_dimension(outputs)?;
        let mut state = outputs.clone();
        let mut angles =
            vec![PureStateChannel::from_angle(self.theta).expect("valid"); self.num_wires];
        let mut branch_record = Vec::new();
        for step in &self.steps {
            match *step {
                Step::CheckMerge { keep, drop } => {
                    state.apply_gate(&GateSpec::new(GateKind::Cnot, vec![keep, drop]))?;
                    let rec = state.measure(drop, Basis::Z, rng)?;
                    let branches = check_convolve(angles[keep], angles[drop]);
                    angles[keep] = branches.branch(rec.outcome);
                    branch_record.push(rec);
                }
                Step::VarMerge { keep, drop } => {
                    state.apply_gate(&GateSpec::new(
                        GateKind::VarConv {
                            theta: angles[keep].theta(),
                            theta_prime: angles[drop].theta(),
                        },
                        vec![keep, drop],
                    ))?;
                    angles[keep] = var_convolve(angles[keep], angles[drop]);
                }
            }
        }
        let rec = state.measure(self.root_wire, Basis::X, rng)?;
        let bit = rec.outcome;
        branch_record.push(rec);
        Ok(BitEstimate {
            bit,
            branch_record,
            error_probability: Some(helstrom_error(angles[self.root_wire])),
        })
    }

    /// Exact root-outcome distribution `(P[bit 0], P[bit 1])` of the
    /// destructive decoder on an arbitrary input state, enumerating every
    /// check-measurement branch with its probability.
    pub fn root_distribution_destructive(
        &self,
        outputs: &StateVector,
    ) -> Result<[f64; 2], DecoderError> {
        self.check_dimension(outputs)?;
        let angles = vec![PureStateChannel::from_angle(self.theta).expect("valid"); self.num_wires];
        let mut dist = [0.0f64; 2];
        self.enumerate_branches(outputs.clone(), angles, 0, 1.0, &mut dist)?;
        Ok(dist)
    }

    fn enumerate_branches(
        &self,
        state: StateVector,
        angles: Vec<PureStateChannel>,
        step_idx: usize,
        prob: f64,
        dist: &mut [f64; 2],
    ) -> Result<(), DecoderError> {
        if prob <= BRANCH_TOL {
            return Ok(());
        }
        let mut state = state;
        let mut angles = angles;
        for (i, step) in self.steps.iter().enumerate().skip(step_idx) {
            match *step {
                Step::CheckMerge { keep, drop } => {
                    state.apply_gate(&GateSpec::new(GateKind::Cnot, vec![keep, drop]))?;
                    let (p0, p1) = state.outcome_probabilities(drop, Basis::Z)?;
                    let branches = check_convolve(angles[keep], angles[drop]);
                    for (outcome, p) in [(0u8, p0), (1u8, p1)] {
                        if p <= BRANCH_TOL {
                            continue;
                        }
                        let mut next = state.clone();
                        next.project(drop, Basis::Z, outcome)?;
                        let mut next_angles = angles.clone();
                        next_angles[keep] = branches.branch(outcome);
                        self.enumerate_branches(next, next_angles, i + 1, prob * p, dist)?;
                    }
                    return Ok(());
                }
                Step::VarMerge { keep, drop } => {
                    state.apply_gate(&GateSpec::new(
                        GateKind::VarConv {
                            theta: angles[keep].theta(),
                            theta_prime: angles[drop].theta(),
                        },
                        vec![keep, drop],
                    ))?;
                    angles[keep] = var_convolve(angles[keep], angles[drop]);
                }
            }
        }
        let (p_plus, p_minus) = state.outcome_probabilities(self.root_wire, Basis::X)?;
        dist[0] += prob * p_plus;
        dist[1] += prob * p_minus;
        Ok(())
    }

    /// Exact average bit error over a uniform codeword and root bit, by
    /// enumerating check-outcome patterns at the angle level (branch
    /// probabilities are codeword-independent) and applying the Helstrom
    /// error at each leaf.
    pub fn exact_bit_error(&self) -> f64 {
        fn walk(
            steps: &[Step],
            mut angles: Vec<PureStateChannel>,
            idx: usize,
            prob: f64,
            root: usize,
            acc: &mut f64,
        ) {
            for (i, step) in steps.iter().enumerate().skip(idx) {
                match *step {
                    Step::CheckMerge { keep, drop } => {
                        let branches = check_convolve(angles[keep], angles[drop]);
                        for outcome in [0u8, 1u8] {
                            let p = branches.probability(outcome);
                            if p <= 0.0 {
                                continue;
                            }
                            let mut next = angles.clone();
                            next[keep] = branches.branch(outcome);
                            walk(steps, next, i + 1, prob * p, root, acc);
                        }
                        return;
                    }
                    Step::VarMerge { keep, drop } => {
                        angles[keep] = var_convolve(angles[keep], angles[drop]);
                    }
                }
            }
            *acc += prob * helstrom_error(angles[root]);
        }
        let angles = vec![PureStateChannel::from_angle(self.theta).expect("valid"); self.num_wires];
        let mut acc = 0.0;
        walk(&self.steps, angles, 0, 1.0, self.root_wire, &mut acc);
        acc
    }

    /// Promote to the measurement-free unitary `V_j`: check merges keep their
    /// CNOT and the dropped wires become coherent controls of the downstream
    /// variable-node gates.
    pub fn coherent(&self) -> Result<CoherentCircuit, DecoderError> {
        let base = SymAngle::constant(PureStateChannel::from_angle(self.theta).expect("valid"));
        let mut sym: Vec<SymAngle> = vec![base; self.num_wires];
        let mut gates = Vec::new();
        for step in &self.steps {
            match *step {
                Step::CheckMerge { keep, drop } => {
                    gates.push(GateSpec::new(GateKind::Cnot, vec![keep, drop]));
                    let merged = SymAngle::check_merge(&sym[keep], &sym[drop], drop)?;
                    sym[keep] = merged;
                }
                Step::VarMerge { keep, drop } => {
                    let (controls, pairs) = SymAngle::angle_pairs(&sym[keep], &sym[drop])?;
                    if controls.is_empty() {
                        let (theta, theta_prime) = pairs[0];
                        gates.push(GateSpec::new(
                            GateKind::VarConv { theta, theta_prime },
                            vec![keep, drop],
                        ));
                    } else {
                        gates.push(GateSpec::new(
                            GateKind::ControlledVarConv(ControlTable {
                                controls: controls.clone(),
                                entries: pairs.clone(),
                            }),
                            vec![keep, drop],
                        ));
                    }
                    sym[keep] = SymAngle::var_merge(&sym[keep], &sym[drop])?;
                }
            }
        }
        Ok(CoherentCircuit {
            gates,
            num_wires: self.num_wires,
            root_wire: self.root_wire,
        })
    }

    /// Destructive gate list (measurements included) for export and counting.
    /// Outcome-dependent variable merges appear with tabulated angles.
    pub fn destructive_gates(&self) -> Result<Vec<GateSpec>, DecoderError> {
        let base = SymAngle::constant(PureStateChannel::from_angle(self.theta).expect("valid"));
        let mut sym: Vec<SymAngle> = vec![base; self.num_wires];
        let mut gates = Vec::new();
        for step in &self.steps {
            match *step {
                Step::CheckMerge { keep, drop } => {
                    gates.push(GateSpec::new(GateKind::Cnot, vec![keep, drop]));
                    gates.push(GateSpec::new(GateKind::ZBasisMeasure, vec![drop]));
                    sym[keep] = SymAngle::check_merge(&sym[keep], &sym[drop], drop)?;
                }
                Step::VarMerge { keep, drop } => {
                    let (controls, pairs) = SymAngle::angle_pairs(&sym[keep], &sym[drop])?;
                    if controls.is_empty() {
                        let (theta, theta_prime) = pairs[0];
                        gates.push(GateSpec::new(
                            GateKind::VarConv { theta, theta_prime },
                            vec![keep, drop],
                        ));
                    } else {
                        gates.push(GateSpec::new(
                            GateKind::ControlledVarConv(ControlTable {
                                controls,
                                entries: pairs,
                            }),
                            vec![keep, drop],
                        ));
                    }
                    sym[keep] = SymAngle::var_merge(&sym[keep], &sym[drop])?;
                }
            }
        }
        gates.push(GateSpec::new(GateKind::Hadamard, vec![self.root_wire]));
        gates.push(GateSpec::new(GateKind::ZBasisMeasure, vec![self.root_wire]));
        Ok(gates)
    }

    /// Gate totals of the destructive circuit, without materializing control
    /// tables (so it works for large codes).
    pub fn gate_count_destructive(&self) -> GateCount {
        let mut per_kind: BTreeMap<&'static str, usize> = BTreeMap::new();
        for step in &self.steps {
            match step {
                Step::CheckMerge { .. } => {
                    *per_kind.entry("cnot").or_default() += 1;
                    *per_kind.entry("z_measure").or_default() += 1;
                }
                Step::VarMerge { .. } => {
                    *per_kind.entry("var_conv").or_default() += 1;
                }
            }
        }
        *per_kind.entry("hadamard").or_default() += 1;
        *per_kind.entry("z_measure").or_default() += 1;
        GateCount {
            total: per_kind.values().sum(),
            per_kind,
        }
    }

    /// Gate totals of the coherent unitary `V_j` (no measurements; the root
    /// X-measurement happens outside `V_j`).
    pub fn gate_count_coherent(&self) -> GateCount {
        let mut per_kind: BTreeMap<&'static str, usize> = BTreeMap::new();
        let mut has_controls = vec![false; self.num_wires];
        for step in &self.steps {
            match *step {
                Step::CheckMerge { keep, drop: _ } => {
                    *per_kind.entry("cnot").or_default() += 1;
                    has_controls[keep] = true;
                }
                Step::VarMerge { keep, drop } => {
                    if has_controls[keep] || has_controls[drop] {
                        *per_kind.entry("controlled_var_conv").or_default() += 1;
                    } else {
                        *per_kind.entry("var_conv").or_default() += 1;
                    }
                    has_controls[keep] = has_controls[keep] || has_controls[drop];
                }
            }
        }
        GateCount {
            total: per_kind.values().sum(),
            per_kind,
        }
    }

    /// JSON export of the destructive gate list with tabulated angles,
    /// radians at 17 significant digits.
    pub fn export_json(&self) -> Result<String, DecoderError> {
        let gates = self.destructive_gates()?;
        let mut out = String::from("[\n");
        for (i, gate) in gates.iter().enumerate() {
            let wires = gate
                .wires
                .iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(",");
            match &gate.kind {
                GateKind::Cnot => {
                    out.push_str(&format!("  {{\"kind\":\"cnot\",\"wires\":[{wires}]}}"));
                }
                GateKind::ZBasisMeasure => {
                    out.push_str(&format!("  {{\"kind\":\"z_measure\",\"wires\":[{wires}]}}"));
                }
                GateKind::Hadamard => {
                    out.push_str(&format!("  {{\"kind\":\"hadamard\",\"wires\":[{wires}]}}"));
                }
                GateKind::VarConv { theta, theta_prime } => {
                    out.push_str(&format!(
                        "  {{\"kind\":\"var_conv\",\"wires\":[{wires}],\"theta\":{},\"theta_prime\":{}}}",
                        sig17(*theta),
                        sig17(*theta_prime)
                    ));
                }
                GateKind::ControlledVarConv(table) => {
                    let controls = table
                        .controls
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    let entries = table
                        .entries
                        .iter()
                        .map(|(t, tp)| format!("[{},{}]", sig17(*t), sig17(*tp)))
                        .collect::<Vec<_>>()
                        .join(",");
                    out.push_str(&format!(
                        "  {{\"kind\":\"controlled_var_conv\",\"wires\":[{wires}],\"controls\":[{controls}],\"table\":[{entries}]}}"
                    ));
                }
                other => {
                    out.push_str(&format!("  {{\"kind\":\"{other:?}\",\"wires\":[{wires}]}}"));
                }
            }
            if i + 1 < gates.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push(']');
        Ok(out)
    }
}

impl Step {
    fn wires(&self) -> (usize, usize) {
        match *self {
            Step::CheckMerge { keep, drop } | Step::VarMerge { keep, drop } => (keep, drop),
        }
    }
}

/// Measurement-free unitary `V_j` with coherently controlled variable-node
/// gates. Applying it and X-measuring the root wire reproduces the
/// destructive decoder's statistics exactly; applying the inverse afterwards
/// restores the (projected) output state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentCircuit {
    gates: Vec<GateSpec>,
    num_wires: usize,
    root_wire: usize,
}

impl CoherentCircuit {
    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn root_wire(&self) -> usize {
        self.root_wire
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<(), StateError> {
        for gate in &self.gates {
            state.apply_gate(gate)?;
        }
        Ok(())
    }

    pub fn apply_inverse(&self, state: &mut StateVector) -> Result<(), StateError> {
        for gate in self.gates.iter().rev() {
            match &gate.kind {
                GateKind::Cnot => state.apply_gate(gate)?,
                GateKind::VarConv { theta, theta_prime } => {
                    // U_* is real orthogonal; invert by transposing the blocks
                    state.apply_controlled_var_conv(
                        &ControlTable {
                            controls: vec![],
                            entries: vec![(*theta, *theta_prime)],
                        },
                        gate.wires[0],
                        gate.wires[1],
                        true,
                    )?;
                }
                GateKind::ControlledVarConv(table) => {
                    state.apply_controlled_var_conv(table, gate.wires[0], gate.wires[1], true)?;
                }
                other => {
                    return Err(StateError::NotUnitary(other.clone()));
                }
            }
        }
        Ok(())
    }

    /// Root-outcome distribution after `V_j`, marginalizing the unmeasured
    /// control wires.
    pub fn root_distribution(&self, outputs: &StateVector) -> Result<[f64; 2], StateError> {
        let mut state = outputs.clone();
        self.apply(&mut state)?;
        let (p0, p1) = state.outcome_probabilities(self.root_wire, Basis::X)?;
        Ok([p0, p1])
    }
}

/// Control wires plus one `(theta, theta')` entry per control pattern.
type TabulatedAngles = (Vec<usize>, Vec<(f64, f64)>);

/// Symbolic channel angle: a table over the outcomes of the check wires it
/// depends on. Control wires are kept sorted; the table index packs their
/// bits most-significant-first.
#[derive(Debug, Clone)]
struct SymAngle {
    controls: Vec<usize>,
    table: Vec<PureStateChannel>,
}

impl SymAngle {
    fn constant(ch: PureStateChannel) -> Self {
        Self {
            controls: vec![],
            table: vec![ch],
        }
    }

    fn union_controls(
        a: &[usize],
        b: &[usize],
        extra: Option<usize>,
    ) -> Result<Vec<usize>, DecoderError> {
        let mut controls: Vec<usize> = a.to_vec();
        for &c in b {
            if !controls.contains(&c) {
                controls.push(c);
            }
        }
        if let Some(c) = extra {
            if !controls.contains(&c) {
                controls.push(c);
            }
        }
        controls.sort_unstable();
        if controls.len() > MAX_CONTROLS {
            return Err(DecoderError::ControlTableTooLarge(controls.len()));
        }
        Ok(controls)
    }

    /// Value of `sub`'s packed pattern inside `full`'s packed pattern.
    fn project(full_controls: &[usize], pattern: usize, sub_controls: &[usize]) -> usize {
        let mut out = 0usize;
        for &c in sub_controls {
            let pos = full_controls
                .iter()
                .position(|&x| x == c)
                .expect("subset control");
            let bit = (pattern >> (full_controls.len() - 1 - pos)) & 1;
            out = (out << 1) | bit;
        }
        out
    }

    fn check_merge(
        keep: &SymAngle,
        drop: &SymAngle,
        drop_wire: usize,
    ) -> Result<SymAngle, DecoderError> {
        let controls = Self::union_controls(&keep.controls, &drop.controls, Some(drop_wire))?;
        let mut table = Vec::with_capacity(1 << controls.len());
        for pattern in 0..1usize << controls.len() {
            let ck = keep.table[Self::project(&controls, pattern, &keep.controls)];
            let cd = drop.table[Self::project(&controls, pattern, &drop.controls)];
            let outcome = Self::project(&controls, pattern, &[drop_wire]) as u8;
            table.push(check_convolve(ck, cd).branch(outcome));
        }
        Ok(SymAngle { controls, table })
    }

    fn var_merge(keep: &SymAngle, drop: &SymAngle) -> Result<SymAngle, DecoderError> {
        let controls = Self::union_controls(&keep.controls, &drop.controls, None)?;
        let mut table = Vec::with_capacity(1 << controls.len());
        for pattern in 0..1usize << controls.len() {
            let ck = keep.table[Self::project(&controls, pattern, &keep.controls)];
            let cd = drop.table[Self::project(&controls, pattern, &drop.controls)];
            table.push(var_convolve(ck, cd));
        }
        Ok(SymAngle { controls, table })
    }

    /// `(theta, theta')` pairs for a variable merge, one per control pattern.
    fn angle_pairs(keep: &SymAngle, drop: &SymAngle) -> Result<TabulatedAngles, DecoderError> {
        let controls = Self::union_controls(&keep.controls, &drop.controls, None)?;
        let mut pairs = Vec::with_capacity(1 << controls.len());
        for pattern in 0..1usize << controls.len() {
            let ck = keep.table[Self::project(&controls, pattern, &keep.controls)];
            let cd = drop.table[Self::project(&controls, pattern, &drop.controls)];
            pairs.push((ck.theta(), cd.theta()));
        }
        Ok((controls, pairs))
    }
}

/// Build the destructive single-bit decoding circuit for a tree code: one
/// CNOT + Z-measurement per check merge, one `U_*` per variable merge with
/// outcome-resolved angles, and a final Hadamard + Z-measurement on the root
/// wire realizing the sigma_x Helstrom measurement.
pub fn build_destructive(
    graph: &FactorGraph,
    root: usize,
    w: PureStateChannel,
) -> Result<DecoderCircuit, DecoderError> {
    let sched = schedule(graph, root)?;
    let mut steps = Vec::new();
    // message wire of each node, filled in post-order
    let mut var_wire = vec![usize::MAX; graph.n_vars() + 1];
    let mut check_wire = vec![usize::MAX; graph.checks().len()];
    for visit in &sched.visits {
        match visit {
            NodeVisit::Check { check, child_vars } => {
                if child_vars.is_empty() {
                    return Err(DecoderError::DegenerateCheck(*check));
                }
                let keep = var_wire[child_vars[0]];
                for &v in &child_vars[1..] {
                    steps.push(Step::CheckMerge {
                        keep,
                        drop: var_wire[v],
                    });
                }
                check_wire[*check] = keep;
            }
            NodeVisit::Variable { var, child_checks } => {
                let keep = var - 1;
                for &c in child_checks {
                    steps.push(Step::VarMerge {
                        keep,
                        drop: check_wire[c],
                    });
                }
                var_wire[*var] = keep;
            }
        }
    }
    DecoderCircuit::from_steps(graph.n_vars(), root - 1, w.theta(), steps)
}

/// Coherent unitary `V_j` for decoding bit `root` of a tree code.
pub fn build_coherent(
    graph: &FactorGraph,
    root: usize,
    w: PureStateChannel,
) -> Result<CoherentCircuit, DecoderError> {
    build_destructive(graph, root, w)?.coherent()
}

/// Exact average error of the optimal bitwise measurement realized by the
/// tree circuit for `root`, by branch enumeration.
pub fn exact_bit_error(
    graph: &FactorGraph,
    root: usize,
    w: PureStateChannel,
) -> Result<f64, DecoderError> {
    if graph.n_vars() > EXACT_LIMIT {
        return Err(DecoderError::TooLarge {
            n_vars: graph.n_vars(),
            limit: EXACT_LIMIT,
        });
    }
    Ok(build_destructive(graph, root, w)?.exact_bit_error())
}

/// Sequentially estimate every bit: for each `j` in `order`, apply `V_j`,
/// X-measure wire `j`, record the outcome, and undo `V_j`. State collapse
/// between bits is physical.
pub fn sequential_decode<R: Rng + ?Sized>(
    outputs: &StateVector,
    graph: &FactorGraph,
    w: PureStateChannel,
    order: &[usize],
    rng: &mut R,
) -> Result<SequentialResult, DecoderError> {
    let n = graph.n_vars();
    if outputs.num_qubits() != n {
        return Err(DecoderError::DimensionMismatch {
            got: outputs.num_qubits(),
            need: n,
        });
    }
    {
        let mut seen = vec![false; n + 1];
        if order.len() != n
            || order
                .iter()
                .any(|&j| j == 0 || j > n || std::mem::replace(&mut seen[j], true))
        {
            return Err(DecoderError::BadOrder(n));
        }
    }
    let mut state = outputs.clone();
    let mut bits = vec![0u8; n];
    let mut per_bit = Vec::with_capacity(n);
    let mut eps_sum = 0.0;
    for &j in order {
        let circuit = build_destructive(graph, j, w)?;
        let coherent = circuit.coherent()?;
        let eps = circuit.exact_bit_error();
        eps_sum += eps;
        coherent.apply(&mut state)?;
        let rec = state.measure(circuit.root_wire(), Basis::X, rng)?;
        coherent.apply_inverse(&mut state)?;
        bits[j - 1] = rec.outcome;
        per_bit.push(BitEstimate {
            bit: rec.outcome,
            branch_record: vec![rec],
            error_probability: Some(eps),
        });
    }
    Ok(SequentialResult {
        bits,
        per_bit_estimates: per_bit,
        block_error_bound: (4.0 * eps_sum).min(1.0),
    })
}
