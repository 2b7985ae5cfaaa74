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

//! Dense statevector micro-simulator.
//!
//! States are vectors of 2^m complex amplitudes. Wire 0 is the *most
//! significant* bit of the basis index, so `|10>` on two wires is the basis
//! state with index `0b10 = 2`. All gates are small unitaries applied in place
//! on one or two wires; the only gate constructor with any substance is
//! [`u_var`], the variable-node compression unitary for two pure-state-channel
//! outputs.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

/// Squared-norm drift tolerated before a state is considered invalid.
pub const NORM_TOL: f64 = 1e-10;

/// Probability below which a measurement branch is treated as unreachable.
pub const BRANCH_TOL: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum StateError {
    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("wire {wire} out of range for {num_qubits} qubits")]
    WireOutOfRange { wire: usize, num_qubits: usize },
    #[error("gate wires must be distinct, got {0}")]
    DuplicateWire(usize),
    #[error("state dimension {0} is not a power of two")]
    BadDimension(usize),
    #[error("state norm^2 {0} differs from 1 beyond tolerance")]
    NotNormalized(f64),
    #[error("requested measurement branch has probability {0:.3e} ~ 0")]
    ZeroProbabilityBranch(f64),
    #[error("gate kind {0:?} is a measurement, not a unitary")]
    NotUnitary(GateKind),
}

/// Measurement basis for single-wire measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    X,
    Z,
}

/// Outcome record of a single-wire measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub wire: usize,
    pub basis: Basis,
    pub outcome: u8,
    pub probability: f64,
}

/// One gate of a decoding circuit.
///
/// `VarConv` is the two-wire compression unitary `U_*(theta, theta')`; the
/// first wire keeps the compressed message, the second is left in `|0>`.
/// `ControlledVarConv` applies a pattern-dependent `VarConv` conditioned on the
/// computational-basis value of the control wires. Measurement kinds appear in
/// destructive circuits and are rejected by [`StateVector::apply_gate`].
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    VarConv { theta: f64, theta_prime: f64 },
    Cnot,
    Hadamard,
    PauliZ,
    ControlledVarConv(ControlTable),
    XBasisMeasure,
    ZBasisMeasure,
    Swap,
}

/// Control table of a coherently controlled variable-node gate.
///
/// `entries[p]` holds the `(theta, theta')` pair used when the control wires
/// (in the stored order) spell out the bit pattern `p`, most significant
/// first.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlTable {
    pub controls: Vec<usize>,
    pub entries: Vec<(f64, f64)>,
}

/// A gate together with the wires it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub wires: Vec<usize>,
}

impl GateSpec {
    pub fn new(kind: GateKind, wires: Vec<usize>) -> Self {
        Self { kind, wires }
    }
}

/// Pure qubit state `|theta> = cos(theta/2)|0> + sin(theta/2)|1>`, or
/// `|-theta>` for `sign < 0`. The overlap `<theta|-theta>` equals `cos theta`.
pub fn pure_state(theta: f64, sign: i8) -> Result<StateVector, StateError> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(StateError::AngleOutOfRange(theta));
    }
    let s = if sign < 0 { -1.0 } else { 1.0 };
    Ok(StateVector {
        num_qubits: 1,
        amps: vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::new(s * (theta / 2.0).sin(), 0.0),
        ],
    })
}

/// The 4x4 variable-node compression unitary `U_*(theta, theta')`.
///
/// Acting on `|s.theta> (x) |s.theta'>` (first wire most significant) it
/// produces `|s.theta''> (x) |0>` with `cos theta'' = cos theta cos theta'`,
/// for either sign `s`. All entries are real. Degenerate 2x2 blocks
/// (`1 +- cos theta cos theta' = 0`) are replaced by the identity block; the
/// input state has no amplitude there, so any unitary completion acts the
/// same.
pub fn u_var(theta: f64, theta_prime: f64) -> [[f64; 4]; 4] {
    let cc = theta.cos() * theta_prime.cos();
    let half_diff = (theta - theta_prime) / 2.0;
    let half_sum = (theta + theta_prime) / 2.0;

    // a block maps span{|00>,|11>} -> span{|00>,|01>}
    let a = if 1.0 + cc > 1e-12 {
        let den = (2.0 * (1.0 + cc)).sqrt();
        let a_plus = (half_diff.cos() + half_sum.cos()) / den;
        let a_minus = (half_diff.cos() - half_sum.cos()) / den;
        [[a_plus, a_minus], [a_minus, -a_plus]]
    } else {
        [[1.0, 0.0], [0.0, 1.0]]
    };
    // b block maps span{|01>,|10>} -> span{|10>,|11>}
    let b = if 1.0 - cc > 1e-12 {
        let den = (2.0 * (1.0 - cc)).sqrt();
        let b_plus = (half_sum.sin() - half_diff.sin()) / den;
        let b_minus = (half_sum.sin() + half_diff.sin()) / den;
        [[b_plus, b_minus], [b_minus, -b_plus]]
    } else {
        [[1.0, 0.0], [0.0, 1.0]]
    };

    [
        [a[0][0], 0.0, 0.0, a[0][1]],
        [a[1][0], 0.0, 0.0, a[1][1]],
        [0.0, b[0][0], b[0][1], 0.0],
        [0.0, b[1][0], b[1][1], 0.0],
    ]
}

/// Dense state of `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// All-zeros state `|0...0>`.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    /// Build from raw amplitudes; the length must be a power of two and the
    /// squared norm must be 1 within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let dim = amps.len();
        if dim == 0 || dim & (dim - 1) != 0 {
            return Err(StateError::BadDimension(dim));
        }
        let state = Self {
            num_qubits: dim.trailing_zeros() as usize,
            amps,
        };
        let n2 = state.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(n2));
        }
        Ok(state)
    }

    /// Tensor product of per-wire pure-state-channel outputs
    /// `(x) |(-1)^{bits[j]} theta>`, wire 0 first.
    pub fn channel_outputs(theta: f64, bits: &[u8]) -> Result<Self, StateError> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(StateError::AngleOutOfRange(theta));
        }
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        let n = bits.len();
        let mut amps = Vec::with_capacity(1 << n);
        for idx in 0..1usize << n {
            let mut a = 1.0;
            for (w, &bit) in bits.iter().enumerate() {
                let wire_val = (idx >> (n - 1 - w)) & 1;
                a *= if wire_val == 0 {
                    c
                } else if bit == 0 {
                    s
                } else {
                    -s
                };
            }
            amps.push(Complex64::new(a, 0.0));
        }
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// Tensor product of two states, `self` on the high wires.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_wire(&self, wire: usize) -> Result<(), StateError> {
        if wire >= self.num_qubits {
            return Err(StateError::WireOutOfRange {
                wire,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn bit_mask(&self, wire: usize) -> usize {
        1 << (self.num_qubits - 1 - wire)
    }

    /// Apply a single-qubit unitary (row-major 2x2) on `wire`.
    pub fn apply_1q(&mut self, m: &[[Complex64; 2]; 2], wire: usize) -> Result<(), StateError> {
        self.check_wire(wire)?;
        let mask = self.bit_mask(wire);
        for idx in 0..self.amps.len() {
            if idx & mask == 0 {
                let a0 = self.amps[idx];
                let a1 = self.amps[idx | mask];
                self.amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[idx | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Apply a real two-qubit unitary on `(w1, w2)` with `w1` the most
    /// significant bit of the 4-dim basis ordering.
    pub fn apply_2q_real(
        &mut self,
        m: &[[f64; 4]; 4],
        w1: usize,
        w2: usize,
    ) -> Result<(), StateError> {
        self.check_wire(w1)?;
        self.check_wire(w2)?;
        if w1 == w2 {
            return Err(StateError::DuplicateWire(w1));
        }
        let m1 = self.bit_mask(w1);
        let m2 = self.bit_mask(w2);
        for idx in 0..self.amps.len() {
            if idx & (m1 | m2) == 0 {
                let i = [idx, idx | m2, idx | m1, idx | m1 | m2];
                let a = [
                    self.amps[i[0]],
                    self.amps[i[1]],
                    self.amps[i[2]],
                    self.amps[i[3]],
                ];
                for r in 0..4 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..4 {
                        if m[r][c] != 0.0 {
                            acc += a[c] * m[r][c];
                        }
                    }
                    self.amps[i[r]] = acc;
                }
            }
        }
        Ok(())
    }

    /// Apply a unitary gate. Measurement kinds are rejected; gates act as the
    /// identity on untouched wires and preserve the norm.
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<(), StateError> {
        match &gate.kind {
            GateKind::VarConv { theta, theta_prime } => {
                let m = u_var(*theta, *theta_prime);
                self.apply_2q_real(&m, gate.wires[0], gate.wires[1])
            }
            GateKind::Cnot => {
                self.check_wire(gate.wires[0])?;
                self.check_wire(gate.wires[1])?;
                if gate.wires[0] == gate.wires[1] {
                    return Err(StateError::DuplicateWire(gate.wires[0]));
                }
                let ctrl = self.bit_mask(gate.wires[0]);
                let targ = self.bit_mask(gate.wires[1]);
                for idx in 0..self.amps.len() {
                    if idx & ctrl != 0 && idx & targ == 0 {
                        self.amps.swap(idx, idx | targ);
                    }
                }
                Ok(())
            }
            GateKind::Hadamard => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let m = [
                    [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                    [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
                ];
                self.apply_1q(&m, gate.wires[0])
            }
            GateKind::PauliZ => {
                self.check_wire(gate.wires[0])?;
                let mask = self.bit_mask(gate.wires[0]);
                for idx in 0..self.amps.len() {
                    if idx & mask != 0 {
                        self.amps[idx] = -self.amps[idx];
                    }
                }
                Ok(())
            }
            GateKind::Swap => {
                self.check_wire(gate.wires[0])?;
                self.check_wire(gate.wires[1])?;
                if gate.wires[0] == gate.wires[1] {
                    return Err(StateError::DuplicateWire(gate.wires[0]));
                }
                let m1 = self.bit_mask(gate.wires[0]);
                let m2 = self.bit_mask(gate.wires[1]);
                for idx in 0..self.amps.len() {
                    if idx & m1 != 0 && idx & m2 == 0 {
                        self.amps.swap(idx, (idx & !m1) | m2);
                    }
                }
                Ok(())
            }
            GateKind::ControlledVarConv(table) => {
                self.apply_controlled_var_conv(table, gate.wires[0], gate.wires[1], false)
            }
            GateKind::XBasisMeasure | GateKind::ZBasisMeasure => {
                Err(StateError::NotUnitary(gate.kind.clone()))
            }
        }
    }

    /// Apply a controlled variable-node gate, or its inverse.
    ///
    /// The table entry is selected by the computational-basis pattern of the
    /// control wires; `U_*` blocks are real orthogonal so the inverse is the
    /// transpose.
    pub fn apply_controlled_var_conv(
        &mut self,
        table: &ControlTable,
        keep: usize,
        drop: usize,
        inverse: bool,
    ) -> Result<(), StateError> {
        self.check_wire(keep)?;
        self.check_wire(drop)?;
        if keep == drop {
            return Err(StateError::DuplicateWire(keep));
        }
        for &c in &table.controls {
            self.check_wire(c)?;
            if c == keep || c == drop {
                return Err(StateError::DuplicateWire(c));
            }
        }
        let mats: Vec<[[f64; 4]; 4]> = table
            .entries
            .iter()
            .map(|&(t, tp)| {
                let m = u_var(t, tp);
                if inverse {
                    transpose4(&m)
                } else {
                    m
                }
            })
            .collect();
        let control_masks: Vec<usize> = table.controls.iter().map(|&c| self.bit_mask(c)).collect();
        let mk = self.bit_mask(keep);
        let md = self.bit_mask(drop);
        for idx in 0..self.amps.len() {
            if idx & (mk | md) == 0 {
                let mut pattern = 0usize;
                for &cm in &control_masks {
                    pattern = (pattern << 1) | usize::from(idx & cm != 0);
                }
                let m = &mats[pattern];
                let i = [idx, idx | md, idx | mk, idx | mk | md];
                let a = [
                    self.amps[i[0]],
                    self.amps[i[1]],
                    self.amps[i[2]],
                    self.amps[i[3]],
                ];
                for r in 0..4 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..4 {
                        if m[r][c] != 0.0 {
                            acc += a[c] * m[r][c];
                        }
                    }
                    self.amps[i[r]] = acc;
                }
            }
        }
        Ok(())
    }

    /// Probability that `wire` is measured as `|1>` (Z basis).
    pub fn prob_one(&self, wire: usize) -> Result<f64, StateError> {
        self.check_wire(wire)?;
        let mask = self.bit_mask(wire);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Outcome probabilities `(p0, p1)` for measuring `wire` in `basis`.
    pub fn outcome_probabilities(
        &self,
        wire: usize,
        basis: Basis,
    ) -> Result<(f64, f64), StateError> {
        match basis {
            Basis::Z => {
                let p1 = self.prob_one(wire)?;
                Ok((1.0 - p1, p1))
            }
            Basis::X => {
                let mut tmp = self.clone();
                tmp.apply_gate(&GateSpec::new(GateKind::Hadamard, vec![wire]))?;
                let p1 = tmp.prob_one(wire)?;
                Ok((1.0 - p1, p1))
            }
        }
    }

    /// Sample a measurement of `wire` in `basis` with Born probabilities and
    /// collapse the state.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        wire: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<MeasurementRecord, StateError> {
        let (p0, p1) = self.outcome_probabilities(wire, basis)?;
        let outcome = if rng.gen::<f64>() < p1 { 1u8 } else { 0u8 };
        let probability = if outcome == 1 { p1 } else { p0 };
        self.collapse(wire, basis, outcome, probability)?;
        Ok(MeasurementRecord {
            wire,
            basis,
            outcome,
            probability,
        })
    }

    /// Project `wire` onto an explicit `outcome` in `basis`.
    ///
    /// Returns the branch probability; requesting a branch of probability
    /// ~ 0 is an error.
    pub fn project(&mut self, wire: usize, basis: Basis, outcome: u8) -> Result<f64, StateError> {
        let (p0, p1) = self.outcome_probabilities(wire, basis)?;
        let p = if outcome == 1 { p1 } else { p0 };
        if p < BRANCH_TOL {
            return Err(StateError::ZeroProbabilityBranch(p));
        }
        self.collapse(wire, basis, outcome, p)?;
        Ok(p)
    }

    fn collapse(
        &mut self,
        wire: usize,
        basis: Basis,
        outcome: u8,
        probability: f64,
    ) -> Result<(), StateError> {
        if let Basis::X = basis {
            self.apply_gate(&GateSpec::new(GateKind::Hadamard, vec![wire]))?;
        }
        let mask = self.bit_mask(wire);
        let keep_one = outcome == 1;
        let scale = 1.0 / probability.max(f64::MIN_POSITIVE).sqrt();
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if (idx & mask != 0) == keep_one {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if let Basis::X = basis {
            self.apply_gate(&GateSpec::new(GateKind::Hadamard, vec![wire]))?;
        }
        Ok(())
    }
}

fn transpose4(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut t = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            t[r][c] = m[c][r];
        }
    }
    t
}
