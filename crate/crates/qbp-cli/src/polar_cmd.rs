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

//! `polar-construct` and `polar-sim`.

use crate::config::resolve;
use crate::output::{sig17, Csv};
use crate::{CliError, CommonArgs};
use qbp_core::channel::PureStateChannel;
use qbp_core::polar::{self, PolarCode};
use serde::Deserialize;

pub fn run_construct(args: &CommonArgs, code_out: Option<&str>) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    let theta = cfg.require_theta()?;
    let n = cfg.require_n()?;
    let k = cfg.require_k()?;
    let samples = cfg.trials_or(10_000) as usize;
    let w = PureStateChannel::from_angle(theta).map_err(|e| CliError::usage(e.to_string()))?;
    let (code, estimates) =
        polar::construct(w, n, samples, k, cfg.seed).map_err(|e| CliError::usage(e.to_string()))?;
    let mut csv = Csv::new(&["index", "eps", "stderr"]);
    for est in &estimates {
        csv.row(&[est.index.to_string(), sig17(est.eps), sig17(est.stderr)]);
    }
    csv.emit(cfg.out.as_deref())?;
    if let Some(path) = code_out {
        let json = polar::construction_json(&code, theta, &estimates);
        std::fs::write(path, json)
            .map_err(|e| CliError::usage(format!("cannot write {path}: {e}")))?;
    }
    if let Some(threshold) = cfg.threshold {
        let good = estimates.iter().filter(|e| e.eps < threshold).count();
        let chi = qbp_core::channel::holevo(w).chi;
        eprintln!(
            "polarization: fraction_good={} chi_target={} threshold={}",
            sig17(good as f64 / n as f64),
            sig17(chi),
            sig17(threshold)
        );
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeFile {
    #[serde(rename = "N")]
    n: usize,
    theta: f64,
    frozen: Vec<usize>,
    eps: Vec<f64>,
}

pub fn run_sim(
    args: &CommonArgs,
    code_path: Option<&str>,
    construct_samples: usize,
) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    let (code, theta, eps) = match code_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read code {path}: {e}")))?;
            let file: CodeFile = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("bad code file {path}: {e}")))?;
            if file.eps.len() != file.n {
                return Err(CliError::usage(format!(
                    "code file {path}: eps has {} entries for N = {}",
                    file.eps.len(),
                    file.n
                )));
            }
            let code =
                PolarCode::new(file.n, file.frozen).map_err(|e| CliError::usage(e.to_string()))?;
            (code, file.theta, file.eps)
        }
        None => {
            let theta = cfg.require_theta()?;
            let n = cfg.require_n()?;
            let k = cfg.require_k()?;
            let w =
                PureStateChannel::from_angle(theta).map_err(|e| CliError::usage(e.to_string()))?;
            let (code, estimates) = polar::construct(w, n, construct_samples, k, cfg.seed)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let eps = estimates.iter().map(|e| e.eps).collect();
            (code, theta, eps)
        }
    };
    let w = PureStateChannel::from_angle(theta).map_err(|e| CliError::usage(e.to_string()))?;
    let trials = cfg.trials_or(10_000).max(1);
    let gao: f64 = code.info_indices().iter().map(|&i| eps[i - 1]).sum::<f64>() * 4.0;
    let gao = gao.min(1.0);
    let errors = polar::sc_block_errors_mc(&code, w, trials, cfg.seed)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let block_err = errors as f64 / trials as f64;
    let mut csv = Csv::new(&["N", "k", "theta", "trials", "block_err", "gao_bound"]);
    csv.row(&[
        code.n().to_string(),
        code.k().to_string(),
        sig17(theta),
        trials.to_string(),
        sig17(block_err),
        sig17(gao),
    ]);
    csv.emit(cfg.out.as_deref())?;
    let p_hat = block_err.max(1.0 / trials as f64);
    let sigma = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    if block_err > gao + 3.0 * sigma {
        return Err(CliError::tolerance(format!(
            "block error {block_err} exceeds Gao bound {gao} + 3 sigma"
        )));
    }
    Ok(())
}
