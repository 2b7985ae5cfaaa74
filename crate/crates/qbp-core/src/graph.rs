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

//! Parity-check factor graphs, tree schedules, and the classical LLR
//! belief-propagation reference decoder.
//!
//! Variables are 1-indexed to match the JSON graph format; the quantum
//! decoder maps variable `v` to wire `v - 1`. Graphs are immutable after
//! parsing.

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("malformed graph file: {0}")]
    Malformed(String),
    #[error("variable index {index} out of range 1..={n_vars}")]
    IndexOutOfRange { index: usize, n_vars: usize },
    #[error("duplicate variable {index} in check {check}")]
    DuplicateInCheck { index: usize, check: usize },
    #[error("graph is loopy: cycle closes at check {check}, variable {var}")]
    Loopy { check: usize, var: usize },
    #[error("invalid root variable {0}")]
    InvalidRoot(usize),
    #[error("expected one LLR per variable: got {got}, need {need}")]
    LlrCount { got: usize, need: usize },
    #[error("LLR is NaN")]
    NanLlr,
    #[error("{n_vars} variables exceed the enumeration limit {limit}")]
    TooLarge { n_vars: usize, limit: usize },
}

/// Log-likelihood ratio message, natural log; `+inf`/`-inf` encode perfect
/// knowledge of 0/1. Never NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LlrMessage(f64);

impl LlrMessage {
    pub fn new(value: f64) -> Result<Self, GraphError> {
        if value.is_nan() {
            return Err(GraphError::NanLlr);
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Parity-check factor graph over `n_vars` binary variables (1-indexed).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    n_vars: usize,
    checks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    checks: Vec<Vec<usize>>,
}

/// Parse the UTF-8 JSON graph format `{"n": <int>, "checks": [[<int>...]]}`.
/// Unknown keys are rejected; indices are validated on construction.
pub fn parse_graph(text: &str) -> Result<FactorGraph, GraphError> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
    FactorGraph::new(file.n, file.checks)
}

impl FactorGraph {
    /// Validated constructor; checks keep their given order, members are
    /// sorted ascending.
    pub fn new(n_vars: usize, checks: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut sorted = Vec::with_capacity(checks.len());
        for (ci, mut check) in checks.into_iter().enumerate() {
            check.sort_unstable();
            for pair in check.windows(2) {
                if pair[0] == pair[1] {
                    return Err(GraphError::DuplicateInCheck {
                        index: pair[0],
                        check: ci,
                    });
                }
            }
            for &v in &check {
                if v == 0 || v > n_vars {
                    return Err(GraphError::IndexOutOfRange { index: v, n_vars });
                }
            }
            sorted.push(check);
        }
        Ok(Self {
            n_vars,
            checks: sorted,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    /// Checks adjacent to variable `v`, ascending by check index.
    pub fn checks_of(&self, v: usize) -> Vec<usize> {
        self.checks
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether `x` (0-indexed by variable) satisfies every parity check.
    pub fn is_codeword(&self, x: &[u8]) -> bool {
        self.checks
            .iter()
            .all(|c| c.iter().map(|&v| x[v - 1]).fold(0u8, |a, b| a ^ b) == 0)
    }

    /// GF(2) rank of the parity-check set.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<u64> = self
            .checks
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | (1u64 << (v - 1))))
            .collect();
        let mut rank = 0;
        for bit in 0..self.n_vars {
            let mask = 1u64 << bit;
            if let Some(pos) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) {
                rows.swap(rank, pos);
                let pivot = rows[rank];
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && *row & mask != 0 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

/// Certificate that the bipartite variable/check graph is acyclic, with the
/// number of connected components (forests are accepted).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeCertificate {
    pub components: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Var(usize),
    Check(usize),
}

/// Verify the factor graph is a tree (or forest); reports the first cycle
/// found by a deterministic depth-first walk otherwise.
pub fn assert_tree(graph: &FactorGraph) -> Result<TreeCertificate, GraphError> {
    let n = graph.n_vars;
    let c = graph.checks.len();
    let mut var_seen = vec![false; n + 1];
    let mut check_seen = vec![false; c];
    let mut components = 0;

    let var_checks: Vec<Vec<usize>> = (0..=n)
        .map(|v| if v == 0 { vec![] } else { graph.checks_of(v) })
        .collect();

    for start in 1..=n {
        if var_seen[start] {
            continue;
        }
        components += 1;
        // iterative DFS with explicit parent tracking
        let mut stack: Vec<(Node, Option<Node>)> = vec![(Node::Var(start), None)];
        while let Some((node, parent)) = stack.pop() {
            match node {
                Node::Var(v) => {
                    if var_seen[v] {
                        let check = match parent {
                            Some(Node::Check(ci)) => ci,
                            _ => 0,
                        };
                        return Err(GraphError::Loopy { check, var: v });
                    }
                    var_seen[v] = true;
                    for &ci in var_checks[v].iter().rev() {
                        if Some(Node::Check(ci)) != parent {
                            stack.push((Node::Check(ci), Some(Node::Var(v))));
                        }
                    }
                }
                Node::Check(ci) => {
                    if check_seen[ci] {
                        let var = match parent {
                            Some(Node::Var(v)) => v,
                            _ => 0,
                        };
                        return Err(GraphError::Loopy { check: ci, var });
                    }
                    check_seen[ci] = true;
                    for &v in graph.checks[ci].iter().rev() {
                        if Some(Node::Var(v)) != parent {
                            stack.push((Node::Var(v), Some(Node::Check(ci))));
                        }
                    }
                }
            }
        }
    }
    // isolated checks cannot exist (every check touches >= 1 variable), and
    // empty checks are rejected upstream by the decoder, not here
    components += check_seen.iter().filter(|&&s| !s).count();
    Ok(TreeCertificate { components })
}

/// One node visit in a post-order message schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeVisit {
    /// Variable `var` combines its own channel message with the messages of
    /// the listed child checks (ascending check index).
    Variable {
        var: usize,
        child_checks: Vec<usize>,
    },
    /// Check `check` combines the messages of the listed child variables
    /// (ascending variable index).
    Check {
        check: usize,
        child_vars: Vec<usize>,
    },
}

/// Deterministic post-order schedule of the tree rooted at a variable.
/// Children are visited in ascending index order; every edge of the root's
/// component appears exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSchedule {
    pub root: usize,
    pub visits: Vec<NodeVisit>,
}

/// Build the post-order schedule rooted at variable `root`.
pub fn schedule(graph: &FactorGraph, root: usize) -> Result<TreeSchedule, GraphError> {
    if root == 0 || root > graph.n_vars {
        return Err(GraphError::InvalidRoot(root));
    }
    assert_tree(graph)?;

    let mut visits = Vec::new();
    // recursion via explicit stack; (node, parent) pairs emitted post-order
    fn visit_var(
        graph: &FactorGraph,
        v: usize,
        parent_check: Option<usize>,
        visits: &mut Vec<NodeVisit>,
    ) {
        let child_checks: Vec<usize> = graph
            .checks_of(v)
            .into_iter()
            .filter(|&c| Some(c) != parent_check)
            .collect();
        for &c in &child_checks {
            visit_check(graph, c, v, visits);
        }
        visits.push(NodeVisit::Variable {
            var: v,
            child_checks,
        });
    }
    fn visit_check(graph: &FactorGraph, c: usize, parent_var: usize, visits: &mut Vec<NodeVisit>) {
        let child_vars: Vec<usize> = graph.checks[c]
            .iter()
            .copied()
            .filter(|&v| v != parent_var)
            .collect();
        for &v in &child_vars {
            visit_var(graph, v, Some(c), visits);
        }
        visits.push(NodeVisit::Check {
            check: c,
            child_vars,
        });
    }
    visit_var(graph, root, None, &mut visits);
    Ok(TreeSchedule { root, visits })
}

/// Exact posterior LLR of the root bit given all channel outputs, by
/// message passing on the tree. Variable nodes add incoming LLRs; check
/// nodes use `tanh(l/2) = prod_k tanh(l_k/2)`. Infinite LLRs propagate by
/// their limits; contradictory certainty (`+inf` and `-inf` meeting at a
/// variable node) cancels to 0.
pub fn classical_bp(
    graph: &FactorGraph,
    channel_llrs: &[LlrMessage],
    root: usize,
) -> Result<LlrMessage, GraphError> {
    if channel_llrs.len() != graph.n_vars {
        return Err(GraphError::LlrCount {
            got: channel_llrs.len(),
            need: graph.n_vars,
        });
    }
    let sched = schedule(graph, root)?;
    let mut var_msg = vec![0.0f64; graph.n_vars + 1];
    let mut check_msg = vec![0.0f64; graph.checks.len()];
    for visit in &sched.visits {
        match visit {
            NodeVisit::Variable { var, child_checks } => {
                let mut terms = vec![channel_llrs[var - 1].value()];
                terms.extend(child_checks.iter().map(|&c| check_msg[c]));
                var_msg[*var] = sum_llrs(&terms);
            }
            NodeVisit::Check { check, child_vars } => {
                let mut prod = 1.0f64;
                for &v in child_vars {
                    prod *= (var_msg[v] / 2.0).tanh();
                }
                check_msg[*check] = 2.0 * prod.atanh();
            }
        }
    }
    LlrMessage::new(var_msg[root])
}

/// Sum LLR terms, treating the contradictory `+inf + -inf` combination as a
/// cancelled pair rather than NaN.
fn sum_llrs(terms: &[f64]) -> f64 {
    let mut finite = 0.0;
    let mut pos = 0usize;
    let mut neg = 0usize;
    for &t in terms {
        if t == f64::INFINITY {
            pos += 1;
        } else if t == f64::NEG_INFINITY {
            neg += 1;
        } else {
            finite += t;
        }
    }
    if pos > 0 && neg > 0 {
        finite
    } else if pos > 0 {
        f64::INFINITY
    } else if neg > 0 {
        f64::NEG_INFINITY
    } else {
        finite
    }
}

/// Hard decision: 0 for positive LLR, 1 for negative, 0 on an exact tie.
pub fn bitwise_map(root_llr: LlrMessage) -> u8 {
    if root_llr.value() < 0.0 {
        1
    } else {
        0
    }
}

/// Enumeration limit for [`enumerate_codewords`].
pub const ENUM_LIMIT: usize = 24;

/// All bit-vectors satisfying every parity check, ascending as binary
/// numbers with variable 1 the most significant bit.
pub fn enumerate_codewords(graph: &FactorGraph) -> Result<Vec<Vec<u8>>, GraphError> {
    let n = graph.n_vars;
    if n > ENUM_LIMIT {
        return Err(GraphError::TooLarge {
            n_vars: n,
            limit: ENUM_LIMIT,
        });
    }
    let masks: Vec<u32> = graph
        .checks
        .iter()
        .map(|c| c.iter().fold(0u32, |m, &v| m | (1u32 << (n - v))))
        .collect();
    let mut out = Vec::new();
    for x in 0..1u32 << n {
        if masks.iter().all(|&m| (x & m).count_ones() % 2 == 0) {
            out.push((0..n).map(|w| ((x >> (n - 1 - w)) & 1) as u8).collect());
        }
    }
    Ok(out)
}

/// Random connected tree factor graph with every check of degree >= 2;
/// used by randomized tests and the self-test suite.
pub fn random_tree_code<R: rand::Rng + ?Sized>(rng: &mut R, max_vars: usize) -> FactorGraph {
    let target = rng.gen_range(1..=max_vars.max(1));
    let mut n_vars = 1usize;
    let mut checks: Vec<Vec<usize>> = Vec::new();
    while n_vars < target {
        let attach = rng.gen_range(1..=n_vars);
        let new_vars = (rng.gen_range(1..=2usize)).min(target - n_vars);
        let mut check = vec![attach];
        for _ in 0..new_vars {
            n_vars += 1;
            check.push(n_vars);
        }
        checks.push(check);
    }
    FactorGraph::new(n_vars, checks).expect("generated graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn fig1_graph() -> FactorGraph {
        parse_graph(r#"{"n": 4, "checks": [[1,3],[1,2,4]]}"#).unwrap()
    }

    #[test]
    fn parse_fig1_and_rep3() {
        let g = fig1_graph();
        assert_eq!(g.n_vars(), 4);
        assert_eq!(g.checks(), &[vec![1, 3], vec![1, 2, 4]]);
        let rep3 = parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3]]}"#).unwrap();
        assert_eq!(rep3.checks().len(), 2);
        let free = parse_graph(r#"{"n": 1, "checks": []}"#).unwrap();
        assert_eq!(free.n_vars(), 1);
    }

    #[test]
    fn parse_rejects_malformed_inputs() {
        assert!(matches!(
            parse_graph(r#"{"n": 2, "checks": [[1,2]], "extra": 1}"#),
            Err(GraphError::Malformed(_))
        ));
        assert!(matches!(
            parse_graph(r#"{"n": 2, "checks": [[1,3]]}"#),
            Err(GraphError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            parse_graph(r#"{"n": 2, "checks": [[1,1]]}"#),
            Err(GraphError::DuplicateInCheck { index: 1, check: 0 })
        ));
        assert!(parse_graph("not json").is_err());
    }

    #[test]
    fn assert_tree_accepts_trees_and_forests() {
        assert_eq!(
            assert_tree(&fig1_graph()),
            Ok(TreeCertificate { components: 1 })
        );
        let forest = parse_graph(r#"{"n": 2, "checks": []}"#).unwrap();
        assert_eq!(assert_tree(&forest), Ok(TreeCertificate { components: 2 }));
    }

    #[test]
    fn assert_tree_reports_cycles() {
        let doubled = parse_graph(r#"{"n": 2, "checks": [[1,2],[1,2]]}"#).unwrap();
        assert!(matches!(
            assert_tree(&doubled),
            Err(GraphError::Loopy { .. })
        ));
        let triangle = parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3],[1,3]]}"#).unwrap();
        assert!(matches!(
            assert_tree(&triangle),
            Err(GraphError::Loopy { .. })
        ));
    }

    #[test]
    fn schedule_fig1_rooted_at_one() {
        let sched = schedule(&fig1_graph(), 1).unwrap();
        assert_eq!(
            sched.visits,
            vec![
                NodeVisit::Variable {
                    var: 3,
                    child_checks: vec![]
                },
                NodeVisit::Check {
                    check: 0,
                    child_vars: vec![3]
                },
                NodeVisit::Variable {
                    var: 2,
                    child_checks: vec![]
                },
                NodeVisit::Variable {
                    var: 4,
                    child_checks: vec![]
                },
                NodeVisit::Check {
                    check: 1,
                    child_vars: vec![2, 4]
                },
                NodeVisit::Variable {
                    var: 1,
                    child_checks: vec![0, 1]
                },
            ]
        );
    }

    #[test]
    fn schedule_single_variable() {
        let g = parse_graph(r#"{"n": 1, "checks": []}"#).unwrap();
        let sched = schedule(&g, 1).unwrap();
        assert_eq!(sched.visits.len(), 1);
    }

    #[test]
    fn schedule_rep3_rooted_at_two() {
        let g = parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3]]}"#).unwrap();
        let sched = schedule(&g, 2).unwrap();
        // both checks feed the root
        match sched.visits.last().unwrap() {
            NodeVisit::Variable { var, child_checks } => {
                assert_eq!(*var, 2);
                assert_eq!(child_checks, &vec![0, 1]);
            }
            other => panic!("unexpected final visit {other:?}"),
        }
    }

    #[test]
    fn schedule_is_deterministic() {
        let g = fig1_graph();
        let a = schedule(&g, 1).unwrap();
        let b = schedule(&g, 1).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert!(matches!(schedule(&g, 0), Err(GraphError::InvalidRoot(0))));
        assert!(matches!(schedule(&g, 5), Err(GraphError::InvalidRoot(5))));
    }

    #[test]
    fn enumerate_fig1_codewords() {
        let words = enumerate_codewords(&fig1_graph()).unwrap();
        let expect: Vec<Vec<u8>> = vec![
            vec![0, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 1, 0],
        ];
        assert_eq!(words, expect);
    }

    #[test]
    fn enumerate_rep3_and_free() {
        let rep3 = parse_graph(r#"{"n": 3, "checks": [[1,2],[2,3]]}"#).unwrap();
        assert_eq!(
            enumerate_codewords(&rep3).unwrap(),
            vec![vec![0, 0, 0], vec![1, 1, 1]]
        );
        let free = parse_graph(r#"{"n": 2, "checks": []}"#).unwrap();
        assert_eq!(enumerate_codewords(&free).unwrap().len(), 4);
    }

    #[test]
    fn codeword_count_is_two_to_n_minus_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let g = random_tree_code(&mut rng, 8);
            let words = enumerate_codewords(&g).unwrap();
            assert_eq!(words.len(), 1 << (g.n_vars() - g.rank()));
            assert!(words.iter().all(|w| g.is_codeword(w)));
        }
    }

    #[test]
    fn bp_zero_llrs_give_zero() {
        let llrs: Vec<LlrMessage> = (0..4).map(|_| LlrMessage::new(0.0).unwrap()).collect();
        let out = classical_bp(&fig1_graph(), &llrs, 1).unwrap();
        assert_eq!(out.value(), 0.0);
    }

    #[test]
    fn bp_single_variable_returns_channel_llr() {
        let g = parse_graph(r#"{"n": 1, "checks": []}"#).unwrap();
        let out = classical_bp(&g, &[LlrMessage::new(0.37).unwrap()], 1).unwrap();
        assert_eq!(out.value(), 0.37);
    }

    #[test]
    fn bp_check_rule_degenerations() {
        // degree-2 check: +inf partner acts as identity; 0 partner forces 0.
        let g = parse_graph(r#"{"n": 2, "checks": [[1,2]]}"#).unwrap();
        let out = classical_bp(
            &g,
            &[
                LlrMessage::new(0.9).unwrap(),
                LlrMessage::new(f64::INFINITY).unwrap(),
            ],
            1,
        )
        .unwrap();
        assert_eq!(out.value(), f64::INFINITY);
        let partial = classical_bp(
            &g,
            &[LlrMessage::new(0.9).unwrap(), LlrMessage::new(2.0).unwrap()],
            1,
        )
        .unwrap();
        // a degree-2 check relays its single child message exactly
        assert!((partial.value() - 2.9).abs() < 1e-12);
        // a degree-3 check attenuates finite messages
        let g3 = parse_graph(r#"{"n": 3, "checks": [[1,2,3]]}"#).unwrap();
        let out3 = classical_bp(
            &g3,
            &[
                LlrMessage::new(0.0).unwrap(),
                LlrMessage::new(2.0).unwrap(),
                LlrMessage::new(1.5).unwrap(),
            ],
            1,
        )
        .unwrap();
        let expect = 2.0 * ((1.0f64.tanh()) * (0.75f64.tanh())).atanh();
        assert!((out3.value() - expect).abs() < 1e-12);
        assert!(out3.value() < 1.5);
        let zero = classical_bp(
            &g,
            &[LlrMessage::new(0.9).unwrap(), LlrMessage::new(0.0).unwrap()],
            1,
        )
        .unwrap();
        assert!((zero.value() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn bp_infinite_partner_is_identity_through_check() {
        let g = parse_graph(r#"{"n": 2, "checks": [[1,2]]}"#).unwrap();
        // root 2, variable 1 known perfectly: message through the check is
        // +inf, so the root LLR is +inf plus its own channel term.
        let out = classical_bp(
            &g,
            &[
                LlrMessage::new(f64::INFINITY).unwrap(),
                LlrMessage::new(-0.4).unwrap(),
            ],
            2,
        )
        .unwrap();
        assert_eq!(out.value(), f64::INFINITY);
    }

    #[test]
    fn bitwise_map_signs_and_tie() {
        assert_eq!(bitwise_map(LlrMessage::new(2.3).unwrap()), 0);
        assert_eq!(bitwise_map(LlrMessage::new(-0.1).unwrap()), 1);
        assert_eq!(bitwise_map(LlrMessage::new(0.0).unwrap()), 0);
        assert!(LlrMessage::new(f64::NAN).is_err());
    }

    #[test]
    fn enumerate_rejects_oversized_graphs() {
        let g = FactorGraph::new(25, vec![]).unwrap();
        assert!(matches!(
            enumerate_codewords(&g),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn random_tree_codes_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let g = random_tree_code(&mut rng, 10);
            assert!(assert_tree(&g).is_ok());
            assert!(g.checks().iter().all(|c| c.len() >= 2));
            let _ = rng.gen::<u64>();
        }
    }
}
