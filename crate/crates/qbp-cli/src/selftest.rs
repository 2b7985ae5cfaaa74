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

//! `selftest`: the full invariant suite, one pass/fail line per check.
//!
//! Verdicts are robust to the seed at the stated tolerances; the optional
//! fault injection perturbs a U_* entry so the compression check can be seen
//! to fail.

use crate::config::resolve;
use crate::{CliError, CommonArgs};
use qbp_core::adc::{self, AdcParams};
use qbp_core::channel::{check_convolve, holevo, var_convolve, PureStateChannel};
use qbp_core::decoder;
use qbp_core::graph::{self, LlrMessage};
use qbp_core::oracle;
use qbp_core::polar;
use qbp_core::seeding::trial_rng;
use qbp_core::statevec::{pure_state, u_var, StateVector};
use qbp_core::Complex64;
use rand::Rng;
use std::f64::consts::PI;

struct Check {
    name: &'static str,
    result: Result<String, String>,
}

pub fn run(args: &CommonArgs, inject_fault: Option<&str>) -> Result<(), CliError> {
    let cfg = resolve(args)?;
    let seed = cfg.seed;
    let perturb = match inject_fault {
        Some("u-var") => 1e-6,
        _ => 0.0,
    };

    let checks = vec![
        Check {
            name: "u-var-unitarity",
            result: unitarity(seed),
        },
        Check {
            name: "compression-identity",
            result: compression(seed, perturb),
        },
        Check {
            name: "check-node-statistics",
            result: check_statistics(seed),
        },
        Check {
            name: "eigensolver-residual",
            result: eigensolver(seed),
        },
        Check {
            name: "tree-optimality-vs-oracle",
            result: tree_optimality(seed),
        },
        Check {
            name: "coherent-destructive-equivalence",
            result: equivalence(seed),
        },
        Check {
            name: "sequential-gao-bound",
            result: gao_bound(seed),
        },
        Check {
            name: "holevo-conservation",
            result: conservation(seed),
        },
        Check {
            name: "trajectory-replay",
            result: replay(seed),
        },
        Check {
            name: "phase-reduction",
            result: phase_reduction(),
        },
        Check {
            name: "rate-equals-capacity",
            result: rate_capacity(),
        },
        Check {
            name: "classical-bp-vs-brute-force",
            result: classical_bp(seed),
        },
    ];

    let mut failures = 0usize;
    for check in &checks {
        match &check.result {
            Ok(detail) => println!("selftest {}: PASS ({detail})", check.name),
            Err(detail) => {
                failures += 1;
                println!("selftest {}: FAIL ({detail})", check.name);
            }
        }
    }
    println!(
        "selftest summary: {}/{} checks passed",
        checks.len() - failures,
        checks.len()
    );
    if failures > 0 {
        return Err(CliError::tolerance(format!(
            "{failures} selftest checks failed"
        )));
    }
    Ok(())
}

#[allow(clippy::needless_range_loop)] // transposed matrix-product indexing
fn unitarity(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m = u_var(rng.gen::<f64>() * PI, rng.gen::<f64>() * PI);
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += m[k][r] * m[k][c];
                }
                worst = worst.max((acc - f64::from(u8::from(r == c))).abs());
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("max |M^T M - I| = {worst:.3e}"))
    } else {
        Err(format!("max |M^T M - I| = {worst:.3e} >= 1e-12"))
    }
}

fn compression(seed: u64, perturb: f64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let theta = rng.gen::<f64>() * PI;
        let theta_p = rng.gen::<f64>() * PI;
        let sign = if rng.gen::<bool>() { 1i8 } else { -1 };
        let mut m = u_var(theta, theta_p);
        m[0][0] += perturb;
        let mut st = pure_state(theta, sign)
            .unwrap()
            .tensor(&pure_state(theta_p, sign).unwrap());
        st.apply_2q_real(&m, 0, 1).map_err(|e| e.to_string())?;
        let merged = (theta.cos() * theta_p.cos()).clamp(-1.0, 1.0).acos();
        let target = pure_state(merged, sign)
            .unwrap()
            .tensor(&pure_state(0.0, 1).unwrap());
        worst = worst.max((st.inner(&target).norm() - 1.0).abs());
        worst = worst.max(st.prob_one(1).map_err(|e| e.to_string())?);
    }
    if worst < 1e-12 {
        Ok(format!("max residual {worst:.3e}"))
    } else {
        Err(format!("max residual {worst:.3e} >= 1e-12"))
    }
}

fn check_statistics(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let theta = rng.gen::<f64>() * PI;
        let theta_p = rng.gen::<f64>() * PI;
        let w = PureStateChannel::from_angle(theta).unwrap();
        let wp = PureStateChannel::from_angle(theta_p).unwrap();
        let branches = check_convolve(w, wp);
        let mut st = pure_state(theta, 1)
            .unwrap()
            .tensor(&pure_state(theta_p, 1).unwrap());
        st.apply_gate(&qbp_core::statevec::GateSpec::new(
            qbp_core::statevec::GateKind::Cnot,
            vec![0, 1],
        ))
        .map_err(|e| e.to_string())?;
        let (p0, _) = st
            .outcome_probabilities(1, qbp_core::statevec::Basis::Z)
            .map_err(|e| e.to_string())?;
        worst = worst.max((p0 - branches.p0).abs());
    }
    if worst < 1e-10 {
        Ok(format!("max probability deviation {worst:.3e}"))
    } else {
        Err(format!("max probability deviation {worst:.3e} >= 1e-10"))
    }
}

fn eigensolver(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 4);
    let mut worst: f64 = 0.0;
    for &dim in &[2usize, 4, 8, 16, 32] {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            data[r * dim + r] = Complex64::new(rng.gen::<f64>() - 0.5, 0.0);
            for c in 0..r {
                let z = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                data[r * dim + c] = z;
                data[c * dim + r] = z.conj();
            }
        }
        let (vals, vecs) =
            qbp_core::density::hermitian_eig(dim, &data).map_err(|e| e.to_string())?;
        for (lam, vec) in vals.iter().zip(&vecs) {
            let mut resid = 0.0f64;
            for r in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in 0..dim {
                    acc += data[r * dim + c] * vec[c];
                }
                resid += (acc - vec[r] * *lam).norm_sqr();
            }
            worst = worst.max(resid.sqrt());
        }
    }
    if worst < 1e-9 {
        Ok(format!("max ||Av - lv|| = {worst:.3e}"))
    } else {
        Err(format!("max ||Av - lv|| = {worst:.3e} >= 1e-9"))
    }
}

fn tree_optimality(seed: u64) -> Result<String, String> {
    let fig1 = graph::parse_graph(r#"{"n": 4, "checks": [[1,3],[1,2,4]]}"#).unwrap();
    let mut rng = trial_rng(seed, 5);
    let mut worst: f64 = 0.0;
    let mut graphs = vec![fig1];
    for _ in 0..10 {
        graphs.push(graph::random_tree_code(&mut rng, 6));
    }
    for (gi, g) in graphs.iter().enumerate() {
        let theta = [0.3, 0.7, 1.2][gi % 3];
        let w = PureStateChannel::from_angle(theta).unwrap();
        let root = gi % g.n_vars() + 1;
        let got = decoder::exact_bit_error(g, root, w).map_err(|e| e.to_string())?;
        let want = match oracle::bit_hypothesis_states(g, w, root) {
            Ok(pair) => {
                oracle::optimal_bit_error(&pair)
                    .map_err(|e| e.to_string())?
                    .optimal_error
            }
            Err(oracle::OracleError::ConstantBit(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        worst = worst.max((got - want).abs());
    }
    if worst < 1e-9 {
        Ok(format!("max gap to Helstrom optimum {worst:.3e}"))
    } else {
        Err(format!("max gap {worst:.3e} >= 1e-9"))
    }
}

fn equivalence(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 6);
    let graphs = [
        graph::parse_graph(r#"{"n": 4, "checks": [[1,3],[1,2,4]]}"#).unwrap(),
        graph::parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3]]}"#).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for g in &graphs {
        let w = PureStateChannel::from_angle(0.8).unwrap();
        let circ = decoder::build_destructive(g, 1, w).map_err(|e| e.to_string())?;
        let coh = circ.coherent().map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let n = g.n_vars();
            let mut amps: Vec<Complex64> = (0..1 << n)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut amps {
                *a /= norm;
            }
            let input = StateVector::from_amplitudes(amps).unwrap();
            let d = circ
                .root_distribution_destructive(&input)
                .map_err(|e| e.to_string())?;
            let c = coh.root_distribution(&input).map_err(|e| e.to_string())?;
            worst = worst.max((d[0] - c[0]).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("max outcome-distribution gap {worst:.3e}"))
    } else {
        Err(format!("max outcome-distribution gap {worst:.3e} >= 1e-10"))
    }
}

fn gao_bound(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 7);
    let mut graphs = vec![
        graph::parse_graph(r#"{"n": 4, "checks": [[1,3],[1,2,4]]}"#).unwrap(),
        graph::parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3]]}"#).unwrap(),
    ];
    for _ in 0..5 {
        graphs.push(graph::random_tree_code(&mut rng, 5));
    }
    for g in &graphs {
        let w = PureStateChannel::from_angle(0.9).unwrap();
        let block = oracle::sequential_exact_block_error(g, w).map_err(|e| e.to_string())?;
        let eps_sum: f64 = (1..=g.n_vars())
            .map(|bit| decoder::exact_bit_error(g, bit, w).unwrap())
            .sum();
        let bound = (4.0 * eps_sum).min(1.0);
        if block > bound + 1e-12 {
            return Err(format!("block {block} exceeds bound {bound}"));
        }
    }
    Ok(format!("{} codes within min(1, 4 sum eps)", graphs.len()))
}

fn conservation(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 8);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let theta = rng.gen::<f64>() * PI;
        let w = PureStateChannel::from_angle(theta).unwrap();
        let b = check_convolve(w, w);
        let lhs = b.p0 * holevo(b.theta0).chi
            + b.p1 * holevo(b.theta1).chi
            + holevo(var_convolve(w, w)).chi;
        worst = worst.max((lhs - 2.0 * holevo(w).chi).abs());
    }
    if worst < 1e-9 {
        Ok(format!("max residual {worst:.3e}"))
    } else {
        Err(format!("max residual {worst:.3e} >= 1e-9"))
    }
}

fn replay(seed: u64) -> Result<String, String> {
    let w = PureStateChannel::from_angle(1.0).unwrap();
    let mut worst: f64 = 0.0;
    for index in 1..=8usize {
        let mut rng = trial_rng(seed, 9 + index as u64);
        let traj =
            polar::sample_synthesized_angle(w, index, 8, &mut rng).map_err(|e| e.to_string())?;
        worst = worst.max((traj.replay(w).overlap() - traj.final_channel.overlap()).abs());
    }
    if worst < 1e-12 {
        Ok(format!("max replay drift {worst:.3e}"))
    } else {
        Err(format!("max replay drift {worst:.3e} >= 1e-12"))
    }
}

fn phase_reduction() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for gi in 0..5 {
        for pi in 0..4 {
            let params = AdcParams::new(0.05 + 0.22 * gi as f64, 0.1 + 0.25 * pi as f64).unwrap();
            let dev = adc::verify_phase_reduction(params).map_err(|e| e.to_string())?;
            worst = worst.max(dev);
        }
    }
    if worst < 1e-12 {
        Ok(format!("max deviation {worst:.3e} on 20 grid points"))
    } else {
        Err(format!("max deviation {worst:.3e} >= 1e-12"))
    }
}

fn rate_capacity() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for gamma in [0.1, 0.25, 0.5] {
        let report = adc::rate_equals_capacity(gamma).map_err(|e| e.to_string())?;
        worst = worst.max(report.gap);
    }
    if worst < 1e-6 {
        Ok(format!("max |R - C| = {worst:.3e}"))
    } else {
        Err(format!("max |R - C| = {worst:.3e} >= 1e-6"))
    }
}

fn classical_bp(seed: u64) -> Result<String, String> {
    let mut rng = trial_rng(seed, 10);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let g = graph::random_tree_code(&mut rng, 8);
        let llrs: Vec<LlrMessage> = (0..g.n_vars())
            .map(|_| LlrMessage::new(5.0 * (rng.gen::<f64>() - 0.5)).unwrap())
            .collect();
        let root = rng.gen_range(1..=g.n_vars());
        let bp = graph::classical_bp(&g, &llrs, root).map_err(|e| e.to_string())?;
        let brute =
            oracle::brute_posterior_classical(&g, &llrs, root).map_err(|e| e.to_string())?;
        worst = worst.max((bp.value() - brute.value()).abs());
    }
    if worst < 1e-9 {
        Ok(format!("max deviation {worst:.3e}"))
    } else {
        Err(format!("max deviation {worst:.3e} >= 1e-9"))
    }
}
