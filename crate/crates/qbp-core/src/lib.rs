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

//! Belief-propagation decoding of binary-input pure-state channels by passing
//! quantum messages on tree factor graphs.
//!
//! The crate is organised around a small dense statevector simulator
//! ([`statevec`], [`density`]), the angle-level algebra of pure-state channels
//! ([`channel`]), the classical factor-graph machinery ([`graph`]), the quantum
//! message-passing decoder circuits ([`decoder`]), brute-force Helstrom oracles
//! ([`oracle`]), polar-code construction and successive cancellation
//! ([`polar`]), and the amplitude-damping rate computations ([`adc`]).

pub mod adc;
pub mod channel;
pub mod decoder;
pub mod density;
pub mod fmt;
pub mod graph;
pub mod oracle;
pub mod polar;
pub mod seeding;
pub mod statevec;

pub use channel::{CheckBranches, HolevoValue, PureStateChannel};
pub use decoder::{BitEstimate, CoherentCircuit, DecoderCircuit, SequentialResult};
pub use density::DensityOperator;
pub use graph::{FactorGraph, LlrMessage, TreeSchedule};
pub use num_complex::Complex64;
pub use polar::{AngleTrajectory, ChannelEstimate, PolarCode, PolarizationStats};
pub use statevec::{Basis, GateKind, GateSpec, MeasurementRecord, StateVector};
