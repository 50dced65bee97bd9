//! Brute-force cross-checks of the tree-count machinery on one small graph.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stclust::graph::{ContiguityGraph, MultiGraph, Partition, Topology};
use stclust::oracle::{count_compatible_trees, enumerate_compatible_partitions, enumerate_spanning_trees, EnumerationBudget};
use stclust::prior::log_partition_prior;
use stclust::treecount::{log_compatible_tree_count, log_tree_count};

use crate::error::{CliError, Result};

/// Partitions examined per K by the per-partition checks.
const PARTITIONS_PER_K: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub nodes: usize,
    pub edges: usize,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph: {} nodes, {} edges", self.nodes, self.edges)?;
        for c in &self.checks {
            writeln!(f, "{} {:<24} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Connected random graph on `n` nodes: a random spanning tree plus extra
/// edges with probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<ContiguityGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    Ok(ContiguityGraph::from_edge_list(n, &pairs)?)
}

fn as_multigraph(g: &ContiguityGraph) -> Result<MultiGraph> {
    Ok(MultiGraph::from_weighted_edges(g.node_count(), &g.weighted_edges())?)
}

pub fn verify(g: &ContiguityGraph, budget: &EnumerationBudget) -> Result<Report> {
    if !g.is_connected() {
        return Err(CliError::Validation("graph is disconnected".into()));
    }
    let n = g.node_count();
    if n > budget.max_nodes {
        return Err(CliError::Validation(format!(
            "{n} nodes exceed the enumeration budget of {}",
            budget.max_nodes
        )));
    }
    let mut checks = Vec::new();

    let trees = enumerate_spanning_trees(g, budget, false)?.count;
    let log_count = log_tree_count(g)?.value();
    let err = (log_count - (trees as f64).ln()).abs();
    checks.push(Check {
        name: "matrix-tree",
        passed: err <= 1e-9,
        detail: format!("{trees} trees, log error {err:.2e}"),
    });

    let mg = as_multigraph(g)?;
    let mut failures = 0;
    for (u, v, m) in mg.weighted_edges() {
        let contracted = enumerate_spanning_trees(&mg.contract_edge(u, v)?, budget, false)?.count;
        let deleted = enumerate_spanning_trees(&mg.delete_pair(u, v)?, budget, false)?.count;
        if m as u128 * contracted + deleted != trees {
            failures += 1;
        }
    }
    checks.push(Check {
        name: "deletion-contraction",
        passed: failures == 0,
        detail: format!("{} pairs, {failures} mismatches", mg.pair_count()),
    });

    let (mut checked, mut worst) = (0, 0.0f64);
    let mut worst_norm = 0.0f64;
    let (mut triples, mut above, mut bridge_mismatch) = (0, 0, 0);
    for k in 1..=n {
        let parts = enumerate_compatible_partitions(g, k, budget)?;
        let total: f64 = parts
            .partitions
            .iter()
            .map(|p| log_partition_prior(g, p).map(f64::exp))
            .sum::<stclust::Result<f64>>()?;
        let k_fact: f64 = (1..=k).map(|i| i as f64).product();
        worst_norm = worst_norm.max((total * k_fact - 1.0).abs());
        for p in parts.partitions.iter().take(PARTITIONS_PER_K) {
            let direct = count_compatible_trees(g, p, budget)?;
            let fast = log_compatible_tree_count(g, p)?.value();
            worst = worst.max((fast - (direct as f64).ln()).abs());
            checked += 1;
            if k >= 2 {
                let (t, a, b) = quotient_pairs(g, p, budget)?;
                triples += t;
                above += a;
                bridge_mismatch += b;
            }
        }
    }
    checks.push(Check {
        name: "compatible-trees",
        passed: worst <= 1e-9,
        detail: format!("{checked} partitions, max log error {worst:.2e}"),
    });
    checks.push(Check {
        name: "prior-normalisation",
        passed: worst_norm <= 1e-9,
        detail: format!("K = 1..{n}, max |sum - 1| {worst_norm:.2e}"),
    });
    checks.push(Check {
        name: "quotient-ratio",
        passed: above == 0 && bridge_mismatch == 0,
        detail: format!(
            "{triples} pairs, ratio <= 1/cut on all but {above}, equality off bridges {bridge_mismatch}"
        ),
    });
    Ok(Report {
        nodes: n,
        edges: g.edge_count(),
        checks,
    })
}

/// For every adjacent cluster pair of `p`: (pairs, pairs where the
/// contraction ratio exceeds `1/cut`, pairs where equality disagrees with
/// the pair being a bridge of the quotient).
fn quotient_pairs(g: &ContiguityGraph, p: &Partition, budget: &EnumerationBudget) -> Result<(usize, usize, usize)> {
    let q = g.quotient_multigraph(p)?;
    let before = enumerate_spanning_trees(&q, budget, false)?.count;
    let (mut pairs, mut above, mut mismatch) = (0, 0, 0);
    for (a, b, cut) in q.weighted_edges() {
        let after = enumerate_spanning_trees(&q.contract_edge(a, b)?, budget, false)?.count;
        let bridge = !q.delete_pair(a, b)?.is_connected();
        pairs += 1;
        if after * cut as u128 > before {
            above += 1;
        }
        if (after * cut as u128 == before) != bridge {
            mismatch += 1;
        }
    }
    Ok((pairs, above, mismatch))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_passes() {
        let g = ContiguityGraph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = verify(&g, &EnumerationBudget::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn random_graph_passes() {
        let g = random_graph(6, 0.4, 11).unwrap();
        assert!(g.is_connected());
        assert!(verify(&g, &EnumerationBudget::default()).unwrap().passed());
    }

    #[test]
    fn rejects_disconnected_and_large() {
        let g = ContiguityGraph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(verify(&g, &EnumerationBudget::default()), Err(CliError::Validation(_))));
        let big = random_graph(12, 0.2, 1).unwrap();
        assert!(matches!(verify(&big, &EnumerationBudget::default()), Err(CliError::Validation(_))));
    }
}
