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

//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured margin (run with `--nocapture` to see them).
//!
//! Every tolerance is pinned here, not computed. Randomized criteria use
//! fixed seeds so the suite is deterministic.

use num_complex::Complex64;
use qbp_core::adc::{self, AdcParams};
use qbp_core::channel::{check_convolve, holevo, var_convolve, PureStateChannel};
use qbp_core::decoder;
use qbp_core::graph::{self, parse_graph, FactorGraph, LlrMessage};
use qbp_core::oracle;
use qbp_core::polar;
use qbp_core::seeding::trial_rng;
use qbp_core::statevec::{pure_state, u_var, Basis, StateVector};
use rand::Rng;
use std::f64::consts::PI;

fn ch(theta: f64) -> PureStateChannel {
    PureStateChannel::from_angle(theta).unwrap()
}

fn fig1() -> FactorGraph {
    parse_graph(r#"{"n": 4, "checks": [[1,3],[1,2,4]]}"#).unwrap()
}

fn rep3() -> FactorGraph {
    parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3]]}"#).unwrap()
}

fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let mut amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

/// Criterion 1: U_* maps |s.t> (x) |s.t'> to |s.t''> (x) |0> with
/// cos t'' = cos t cos t', residual < 1e-12 over 1000 random draws.
#[test]
fn criterion_01_compression_identity() {
    const TOL: f64 = 1e-12;
    let mut rng = trial_rng(101, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let theta = rng.gen::<f64>() * PI;
        let theta_p = rng.gen::<f64>() * PI;
        let sign = if rng.gen::<bool>() { 1i8 } else { -1 };
        let mut st = pure_state(theta, sign)
            .unwrap()
            .tensor(&pure_state(theta_p, sign).unwrap());
        st.apply_2q_real(&u_var(theta, theta_p), 0, 1).unwrap();
        let merged = (theta.cos() * theta_p.cos()).clamp(-1.0, 1.0).acos();
        let target = pure_state(merged, sign)
            .unwrap()
            .tensor(&pure_state(0.0, 1).unwrap());
        worst = worst.max((st.inner(&target).norm() - 1.0).abs());
        worst = worst.max(st.prob_one(1).unwrap());
    }
    assert!(worst < TOL, "compression residual {worst:.3e} >= {TOL:.0e}");
    println!("criterion 01 compression-identity: PASS (worst residual {worst:.3e} < {TOL:.0e})");
}

/// Criterion 2: CNOT + Z-measurement on boxed-convolution outputs reproduces
/// p0 = (1 + cos t cos t')/2 and both conditional overlaps within 1e-10 over
/// 200 random pairs.
#[test]
fn criterion_02_check_node_statistics() {
    const TOL: f64 = 1e-10;
    let mut rng = trial_rng(102, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let theta = rng.gen::<f64>() * PI;
        let theta_p = rng.gen::<f64>() * PI;
        let branches = check_convolve(ch(theta), ch(theta_p));
        for x in [0u8, 1u8] {
            for (s1, s2) in [(1i8, 1i8), (-1, -1)] {
                let (s1, s2) = if x == 0 { (s1, s2) } else { (-s1, s2) };
                let mut st = pure_state(theta, s1)
                    .unwrap()
                    .tensor(&pure_state(theta_p, s2).unwrap());
                st.apply_gate(&qbp_core::statevec::GateSpec::new(
                    qbp_core::statevec::GateKind::Cnot,
                    vec![0, 1],
                ))
                .unwrap();
                let (p0, p1) = st.outcome_probabilities(1, Basis::Z).unwrap();
                worst = worst.max((p0 - branches.p0).abs());
                worst = worst.max((p1 - branches.p1).abs());
                for outcome in [0u8, 1u8] {
                    let p = branches.probability(outcome);
                    if p < 1e-9 {
                        continue;
                    }
                    let mut collapsed = st.clone();
                    collapsed.project(1, Basis::Z, outcome).unwrap();
                    let sign = if x == 0 { 1 } else { -1 };
                    let target = pure_state(branches.branch(outcome).theta(), sign)
                        .unwrap()
                        .tensor(&pure_state(if outcome == 0 { 0.0 } else { PI }, 1).unwrap());
                    worst = worst.max((collapsed.inner(&target).norm() - 1.0).abs());
                }
            }
        }
    }
    assert!(worst < TOL, "check statistics deviation {worst:.3e}");
    println!("criterion 02 check-node-statistics: PASS (worst deviation {worst:.3e} < {TOL:.0e})");
}

/// Criterion 3: on the worked 4-bit code at theta in {0.3, 0.7, 1.2} and on
/// 50 random tree codes (n <= 6), the circuit's exact bit error equals the
/// brute-force Helstrom optimum within 1e-9.
#[test]
fn criterion_03_tree_optimality() {
    const TOL: f64 = 1e-9;
    let mut worst: f64 = 0.0;
    let mut instances = 0usize;
    let thetas = [0.3, 0.7, 1.2];
    for &theta in &thetas {
        let got = decoder::exact_bit_error(&fig1(), 1, ch(theta)).unwrap();
        let pair = oracle::bit_hypothesis_states(&fig1(), ch(theta), 1).unwrap();
        let want = oracle::optimal_bit_error(&pair).unwrap().optimal_error;
        worst = worst.max((got - want).abs());
        instances += 1;
    }
    let mut rng = trial_rng(103, 0);
    for code_idx in 0..50 {
        let g = graph::random_tree_code(&mut rng, 6);
        let root = code_idx % g.n_vars() + 1;
        for &theta in &thetas {
            let got = decoder::exact_bit_error(&g, root, ch(theta)).unwrap();
            let pair = match oracle::bit_hypothesis_states(&g, ch(theta), root) {
                Ok(pair) => pair,
                Err(oracle::OracleError::ConstantBit(_)) => continue,
                Err(e) => panic!("oracle failure: {e}"),
            };
            let want = oracle::optimal_bit_error(&pair).unwrap().optimal_error;
            worst = worst.max((got - want).abs());
            instances += 1;
        }
    }
    assert!(
        worst < TOL,
        "optimality gap {worst:.3e} over {instances} instances"
    );
    println!(
        "criterion 03 tree-optimality: PASS (worst gap {worst:.3e} < {TOL:.0e}, {instances} instances)"
    );
}

/// Criterion 4: destructive and coherent decoders produce identical
/// root-outcome distributions within 1e-10 on 100 random input states per
/// graph.
#[test]
fn criterion_04_coherent_destructive_equivalence() {
    const TOL: f64 = 1e-10;
    let graphs = [
        fig1(),
        rep3(),
        parse_graph(r#"{"n": 5, "checks": [[1,2,3],[3,4,5]]}"#).unwrap(),
        parse_graph(r#"{"n": 6, "checks": [[1,2],[2,3,4],[4,5,6]]}"#).unwrap(),
    ];
    let mut rng = trial_rng(104, 0);
    let mut worst: f64 = 0.0;
    for g in &graphs {
        let circ = decoder::build_destructive(g, 1, ch(0.8)).unwrap();
        let coh = circ.coherent().unwrap();
        for _ in 0..100 {
            let input = random_state(g.n_vars(), &mut rng);
            let d = circ.root_distribution_destructive(&input).unwrap();
            let c = coh.root_distribution(&input).unwrap();
            worst = worst.max((d[0] - c[0]).abs()).max((d[1] - c[1]).abs());
        }
    }
    assert!(worst < TOL, "distribution gap {worst:.3e}");
    println!(
        "criterion 04 coherent-destructive-equivalence: PASS (worst gap {worst:.3e} < {TOL:.0e})"
    );
}

/// Criterion 5: exact sequential block error obeys the noncommutative union
/// bound min(1, 4 sum eps_j) and is at least every per-bit oracle optimum,
/// on tree codes with n <= 6.
#[test]
fn criterion_05_gao_bound() {
    const SLACK: f64 = 1e-12;
    let mut graphs = vec![
        parse_graph(r#"{"n": 1, "checks": []}"#).unwrap(),
        rep3(),
        fig1(),
    ];
    let mut rng = trial_rng(105, 0);
    for _ in 0..10 {
        graphs.push(graph::random_tree_code(&mut rng, 6));
    }
    let mut checked = 0usize;
    for (gi, g) in graphs.iter().enumerate() {
        let theta = [0.9, 0.7, 1.2][gi % 3];
        let w = ch(theta);
        let block = oracle::sequential_exact_block_error(g, w).unwrap();
        let eps_sum: f64 = (1..=g.n_vars())
            .map(|bit| decoder::exact_bit_error(g, bit, w).unwrap())
            .sum();
        let bound = (4.0 * eps_sum).min(1.0);
        assert!(
            block <= bound + SLACK,
            "graph {gi}: block {block} exceeds Gao bound {bound}"
        );
        for bit in 1..=g.n_vars() {
            let opt = match oracle::bit_hypothesis_states(g, w, bit) {
                Ok(pair) => oracle::optimal_bit_error(&pair).unwrap().optimal_error,
                Err(oracle::OracleError::ConstantBit(_)) => 0.0,
                Err(e) => panic!("oracle failure: {e}"),
            };
            assert!(
                block >= opt - SLACK,
                "graph {gi}: block {block} below bit-{bit} optimum {opt}"
            );
        }
        checked += 1;
    }
    println!("criterion 05 gao-bound: PASS ({checked} codes, bound and per-bit floor hold)");
}

/// Criterion 6: V_j gate count <= 4n on random trees up to n = 64; total
/// over all bits <= 4n^2.
#[test]
fn criterion_06_gate_scaling() {
    let mut rng = trial_rng(106, 0);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..30 {
        let g = graph::random_tree_code(&mut rng, 64);
        let n = g.n_vars();
        let mut total_all_bits = 0usize;
        for root in 1..=n {
            let circ = decoder::build_destructive(&g, root, ch(0.5)).unwrap();
            let destructive = circ.gate_count_destructive();
            let coherent = circ.gate_count_coherent();
            assert!(
                destructive.total <= 4 * n,
                "destructive {} gates at n = {n}",
                destructive.total
            );
            assert!(
                coherent.total <= 4 * n,
                "coherent {} gates at n = {n}",
                coherent.total
            );
            total_all_bits += coherent.total;
            max_ratio = max_ratio.max(destructive.total as f64 / n as f64);
        }
        assert!(
            total_all_bits <= 4 * n * n,
            "total {total_all_bits} gates over all bits at n = {n}"
        );
    }
    println!("criterion 06 gate-scaling: PASS (max gates/n = {max_ratio:.2} <= 4)");
}

/// Criterion 7: one-step polarization conserves the Holevo quantity,
/// p0 chi(t0) + p1 chi(t1) + chi(t*) = 2 chi(t) within 1e-9.
#[test]
fn criterion_07_polar_conservation() {
    const TOL: f64 = 1e-9;
    let mut rng = trial_rng(107, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let theta = rng.gen::<f64>() * PI;
        let w = ch(theta);
        let b = check_convolve(w, w);
        let lhs = b.p0 * holevo(b.theta0).chi
            + b.p1 * holevo(b.theta1).chi
            + holevo(var_convolve(w, w)).chi;
        worst = worst.max((lhs - 2.0 * holevo(w).chi).abs());
    }
    assert!(worst < TOL, "conservation residual {worst:.3e}");
    println!("criterion 07 polar-conservation: PASS (worst residual {worst:.3e} < {TOL:.0e})");
}

/// Criterion 8: at theta = pi/3 (chi ~ 0.811278), N = 2^20, 2^10 sampled
/// indices with 10^4 trajectories each and threshold 1e-4, the good
/// fraction is within +-0.05 of chi.
#[test]
fn criterion_08_polarization_trend() {
    const TOL: f64 = 0.05;
    let w = ch(PI / 3.0);
    let chi = holevo(w).chi;
    assert!((chi - 0.811278).abs() < 1e-6);
    let stats = polar::polarization_stats(w, 1 << 20, 10_000, 1e-4, Some(1 << 10), 108).unwrap();
    let dev = (stats.fraction_good - chi).abs();
    assert!(
        dev < TOL,
        "good fraction {} vs chi {chi} (deviation {dev:.4})",
        stats.fraction_good
    );
    println!(
        "criterion 08 polarization-trend: PASS (good fraction {:.4}, chi {:.4}, |diff| {:.4} < {TOL})",
        stats.fraction_good, chi, dev
    );
}

/// Criterion 9: N = 8, k = 2 at theta = pi/3: Monte Carlo SC block error over
/// 10^4 trials stays within the construction-derived Gao bound + 3 sigma;
/// and at N = 2 the exact SC error equals the generic tree decoder's within
/// 1e-10.
#[test]
fn criterion_09_polar_sc_end_to_end() {
    let w = ch(PI / 3.0);
    let (code, estimates) = polar::construct(w, 8, 10_000, 2, 109).unwrap();
    let bound: f64 = code
        .info_indices()
        .iter()
        .map(|&i| estimates[i - 1].eps)
        .sum::<f64>()
        * 4.0;
    let bound = bound.min(1.0);
    let trials = 10_000u64;
    let errors = polar::sc_block_errors_mc(&code, w, trials, 1109).unwrap();
    let rate = errors as f64 / trials as f64;
    let p_hat = rate.max(1.0 / trials as f64);
    let sigma = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    assert!(
        rate <= bound + 3.0 * sigma,
        "block error {rate} exceeds bound {bound} + 3 sigma {sigma}"
    );

    let code2 = polar::PolarCode::new(2, vec![1]).unwrap();
    let sc_err = polar::ScDecoder::new(&code2, w)
        .unwrap()
        .exact_block_error(w)
        .unwrap();
    let tree = parse_graph(r#"{"n": 2, "checks": [[1,2]]}"#).unwrap();
    let tree_err = decoder::exact_bit_error(&tree, 1, w).unwrap();
    assert!(
        (sc_err - tree_err).abs() < 1e-10,
        "N=2 SC {sc_err} vs tree {tree_err}"
    );
    println!(
        "criterion 09 polar-sc-end-to-end: PASS (block error {rate:.5} <= bound {bound:.5} + 3s; N=2 gap {:.2e} < 1e-10)",
        (sc_err - tree_err).abs()
    );
}

/// Criterion 10: closed-form phase reduction (q0, theta0) matches the direct
/// CNOT conjugation of phi_+- within 1e-12 on a 20-point (gamma, p) grid.
#[test]
fn criterion_10_phase_reduction() {
    const TOL: f64 = 1e-12;
    let mut worst: f64 = 0.0;
    for gi in 0..5 {
        for pi in 0..4 {
            let params = AdcParams::new(0.05 + 0.22 * gi as f64, 0.1 + 0.25 * pi as f64).unwrap();
            let dev = adc::verify_phase_reduction(params).unwrap();
            worst = worst.max(dev);
        }
    }
    assert!(worst < TOL, "phase reduction deviation {worst:.3e}");
    println!("criterion 10 phase-reduction: PASS (worst deviation {worst:.3e} < {TOL:.0e} on 20 grid points)");
}

/// Criterion 11: |max_p R - C(gamma)| < 1e-6 for gamma in
/// {0.1, 0.25, 0.3, 0.5}; C(0) = 1 and C(0.5) = 0 within 1e-12.
#[test]
fn criterion_11_rate_equals_capacity() {
    const TOL: f64 = 1e-6;
    let mut worst: f64 = 0.0;
    for gamma in [0.1, 0.25, 0.3, 0.5] {
        let report = adc::rate_equals_capacity(gamma).unwrap();
        worst = worst.max(report.gap);
        assert!(
            report.gap < TOL,
            "gamma {gamma}: |R - C| = {:.3e}",
            report.gap
        );
    }
    let (c0, _) = adc::capacity(0.0).unwrap();
    assert!((c0 - 1.0).abs() < 1e-12, "C(0) = {c0}");
    let (c_half, _) = adc::capacity(0.5).unwrap();
    assert!(c_half.abs() < 1e-12, "C(0.5) = {c_half}");
    println!(
        "criterion 11 rate-equals-capacity: PASS (worst |R - C| {worst:.3e} < {TOL:.0e}; C(0) = 1, C(1/2) = 0)"
    );
}

/// Criterion 12: classical BP equals brute-force marginalization on 200
/// random tree instances (n <= 10) within 1e-9.
#[test]
fn criterion_12_classical_bp_exactness() {
    const TOL: f64 = 1e-9;
    let mut rng = trial_rng(112, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let g = graph::random_tree_code(&mut rng, 10);
        let llrs: Vec<LlrMessage> = (0..g.n_vars())
            .map(|_| LlrMessage::new(6.0 * (rng.gen::<f64>() - 0.5)).unwrap())
            .collect();
        let root = rng.gen_range(1..=g.n_vars());
        let bp = graph::classical_bp(&g, &llrs, root).unwrap();
        let brute = oracle::brute_posterior_classical(&g, &llrs, root).unwrap();
        worst = worst.max((bp.value() - brute.value()).abs());
    }
    assert!(worst < TOL, "BP deviation {worst:.3e}");
    println!("criterion 12 classical-bp-exactness: PASS (worst deviation {worst:.3e} < {TOL:.0e})");
}
