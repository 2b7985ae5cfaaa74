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

//! `adc`: rate and capacity tables for the amplitude damping channel.
//!
//! Without `--p`: capacity rows `gamma, p_star, C, R_max, gap` (single row
//! for `--gamma`, else a 0..1 sweep in steps of 0.05); any gap >= 1e-6 is a
//! tolerance failure. With `--p`: fixed-input rows
//! `gamma, p, H_Z_given_B, H_X_given_BA, R`.

use crate::config::resolve;
use crate::output::{sig17, Csv};
use crate::{CliError, CommonArgs};
use qbp_core::adc::{self, AdcParams};

const GAP_TOL: f64 = 1e-6;

pub fn run(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    let gammas: Vec<f64> = match cfg.gamma {
        Some(g) => vec![g],
        None => (0..=20).map(|i| i as f64 * 0.05).collect(),
    };
    match cfg.p {
        Some(p) => {
            let mut csv = Csv::new(&["gamma", "p", "H_Z_given_B", "H_X_given_BA", "R"]);
            for &gamma in &gammas {
                let params =
                    AdcParams::new(gamma, p).map_err(|e| CliError::usage(e.to_string()))?;
                let report = adc::rate(params).map_err(|e| CliError::tolerance(e.to_string()))?;
                csv.row(&[
                    sig17(gamma),
                    sig17(p),
                    sig17(report.h_z_given_b),
                    sig17(report.h_x_given_ba),
                    sig17(report.r),
                ]);
            }
            csv.emit(cfg.out.as_deref())
        }
        None => {
            let mut csv = Csv::new(&["gamma", "p_star", "C", "R_max", "gap"]);
            let mut worst_gap: f64 = 0.0;
            for &gamma in &gammas {
                let report =
                    adc::rate_equals_capacity(gamma).map_err(|e| CliError::usage(e.to_string()))?;
                worst_gap = worst_gap.max(report.gap);
                csv.row(&[
                    sig17(gamma),
                    sig17(report.p_star_capacity),
                    sig17(report.c),
                    sig17(report.r_max),
                    sig17(report.gap),
                ]);
            }
            csv.emit(cfg.out.as_deref())?;
            if worst_gap >= GAP_TOL {
                return Err(CliError::tolerance(format!(
                    "rate/capacity gap {worst_gap:.3e} >= {GAP_TOL:.0e}"
                )));
            }
            Ok(())
        }
    }
}
