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

//! Angle-level algebra of binary-input pure-state channels.
//!
//! A pure-state channel maps the bit `x` to `|(-1)^x theta>`; everything about
//! it is captured by the overlap `cos theta`. Channels combine at variable
//! nodes (overlaps multiply) and at check nodes (a CNOT plus measurement
//! splits the pair into two outcome-conditioned channels). All formulas are
//! computed in cos-space and converted to angles on demand, which keeps deep
//! polar recursions free of trigonometric drift.

use crate::statevec::{GateKind, GateSpec, StateError, StateVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("overlap {0} outside [-1, 1]")]
    OverlapOutOfRange(f64),
}

/// Binary-input classical-quantum channel with pure qubit outputs
/// `|+theta>` and `|-theta>`; the overlap of the two outputs is `cos theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateChannel {
    cos_theta: f64,
}

impl PureStateChannel {
    /// Channel from its output angle in `[0, pi]`.
    pub fn from_angle(theta: f64) -> Result<Self, ChannelError> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(ChannelError::AngleOutOfRange(theta));
        }
        Ok(Self {
            cos_theta: theta.cos(),
        })
    }

    /// Channel from its overlap `cos theta` in `[-1, 1]`.
    pub fn from_overlap(cos_theta: f64) -> Result<Self, ChannelError> {
        if !(-1.0..=1.0).contains(&cos_theta) {
            return Err(ChannelError::OverlapOutOfRange(cos_theta));
        }
        Ok(Self { cos_theta })
    }

    pub fn theta(&self) -> f64 {
        self.cos_theta.clamp(-1.0, 1.0).acos()
    }

    pub fn overlap(&self) -> f64 {
        self.cos_theta
    }
}

/// The two outcome-conditioned channels produced by a check-node convolution.
///
/// Outcome `j` occurs with probability `p_j`; branches of probability zero
/// are flagged unreachable and carry the conventional angle 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckBranches {
    pub p0: f64,
    pub theta0: PureStateChannel,
    pub p1: f64,
    pub theta1: PureStateChannel,
}

impl CheckBranches {
    pub fn probability(&self, outcome: u8) -> f64 {
        if outcome == 0 {
            self.p0
        } else {
            self.p1
        }
    }

    pub fn branch(&self, outcome: u8) -> PureStateChannel {
        if outcome == 0 {
            self.theta0
        } else {
            self.theta1
        }
    }

    pub fn reachable(&self, outcome: u8) -> bool {
        self.probability(outcome) > 0.0
    }
}

/// Holevo quantity of a channel, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolevoValue {
    pub chi: f64,
}

/// Binary entropy in bits.
pub fn h2(q: f64) -> f64 {
    let mut acc = 0.0;
    if q > 0.0 {
        acc -= q * q.log2();
    }
    if q < 1.0 {
        acc -= (1.0 - q) * (1.0 - q).log2();
    }
    acc
}

/// Variable-node convolution: both channels see the same input, so outputs
/// tensor and the overlaps multiply, `cos theta'' = cos theta cos theta'`.
pub fn var_convolve(w: PureStateChannel, w_prime: PureStateChannel) -> PureStateChannel {
    PureStateChannel {
        cos_theta: w.cos_theta * w_prime.cos_theta,
    }
}

/// Check-node convolution: outcome 0 occurs with probability
/// `(1 + cos theta cos theta')/2` and shrinks the angle,
/// `cos theta_0 = (cos theta + cos theta')/(1 + cos theta cos theta')`;
/// outcome 1 grows it,
/// `cos theta_1 = (cos theta - cos theta')/(1 - cos theta cos theta')`.
/// A zero-probability branch gets angle 0 by convention.
pub fn check_convolve(w: PureStateChannel, w_prime: PureStateChannel) -> CheckBranches {
    let c = w.cos_theta;
    let cp = w_prime.cos_theta;
    let p0 = (1.0 + c * cp) / 2.0;
    let p1 = 1.0 - p0;
    let theta0 = if p0 > 0.0 {
        PureStateChannel {
            cos_theta: ((c + cp) / (1.0 + c * cp)).clamp(-1.0, 1.0),
        }
    } else {
        PureStateChannel { cos_theta: 1.0 }
    };
    let theta1 = if p1 > 0.0 {
        PureStateChannel {
            cos_theta: ((c - cp) / (1.0 - c * cp)).clamp(-1.0, 1.0),
        }
    } else {
        PureStateChannel { cos_theta: 1.0 }
    };
    CheckBranches {
        p0,
        theta0,
        p1,
        theta1,
    }
}

/// Minimum-error (Helstrom) probability for discriminating the two outputs
/// with equal priors: `(1 - sin theta)/2`, computed as
/// `(1 - sqrt(1 - cos^2 theta))/2` so branch channels with negative overlap
/// are handled uniformly.
pub fn helstrom_error(w: PureStateChannel) -> f64 {
    let c = w.cos_theta;
    (1.0 - (1.0 - c * c).max(0.0).sqrt()) / 2.0
}

/// Holevo quantity of the uniform binary ensemble,
/// `chi = h2((1 + cos theta)/2)` bits.
pub fn holevo(w: PureStateChannel) -> HolevoValue {
    HolevoValue {
        chi: h2((1.0 + w.cos_theta) / 2.0),
    }
}

/// Side-information correction: apply `sigma_z` on `wire` iff `bit = 1`.
/// On a channel output this flips `|+-theta>` to `|-+theta>`, i.e. flips the
/// effective input bit.
pub fn side_info_flip(state: &mut StateVector, wire: usize, bit: u8) -> Result<(), StateError> {
    if bit & 1 == 1 {
        state.apply_gate(&GateSpec::new(GateKind::PauliZ, vec![wire]))?;
    }
    Ok(())
}
