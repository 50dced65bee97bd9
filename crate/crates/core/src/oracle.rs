//! Brute-force reference implementations.
//!
//! Nothing here is fast. These routines enumerate trees and partitions
//! directly or integrate numerically, and are used to check the closed-form
//! and incremental code paths on small instances.

use std::collections::HashMap;

use ndarray::ArrayView2;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::graph::{ContiguityGraph, MultiGraph, Partition, Topology};
use crate::models::{log_marginal, suff_stats_of_rows, ModelSpec};
use crate::prior::{log_k_prior, PosteriorValue};

/// Hard caps on brute-force work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_nodes: usize,
    pub max_trees: usize,
    pub max_partitions: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_nodes: 8,
            max_trees: 1_000_000,
            max_partitions: 1_000_000,
        }
    }
}

impl EnumerationBudget {
    fn check_nodes(&self, n: usize) -> Result<()> {
        if n > self.max_nodes {
            Err(Error::BudgetExceeded {
                what: "node count",
                limit: self.max_nodes,
            })
        } else {
            Ok(())
        }
    }
}

/// Result of enumerating spanning trees by edge subsets.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTrees {
    /// Edge copies, parallel edges listed once per unit of multiplicity.
    pub edges: Vec<(usize, usize)>,
    pub count: u128,
    /// Each tree as sorted indices into `edges`, when requested.
    pub trees: Option<Vec<Vec<usize>>>,
}

fn edge_copies<G: Topology>(g: &G) -> Vec<(usize, usize)> {
    let mut copies = Vec::new();
    for (u, v, m) in g.weighted_edges() {
        for _ in 0..m {
            copies.push((u, v));
        }
    }
    copies
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Spanning trees by filtering acyclic edge subsets of size `n − 1`.
pub fn enumerate_spanning_trees<G: Topology>(
    g: &G,
    budget: &EnumerationBudget,
    keep_list: bool,
) -> Result<SpanningTrees> {
    let n = g.node_count();
    budget.check_nodes(n)?;
    let edges = edge_copies(g);
    let mut out = SpanningTrees {
        edges: edges.clone(),
        count: 0,
        trees: keep_list.then(Vec::new),
    };
    if n <= 1 {
        out.count = 1;
        if let Some(t) = out.trees.as_mut() {
            t.push(Vec::new());
        }
        return Ok(out);
    }

    struct Search<'a> {
        edges: &'a [(usize, usize)],
        need: usize,
        limit: usize,
        chosen: Vec<usize>,
        out: &'a mut SpanningTrees,
    }

    impl Search<'_> {
        fn go(&mut self, start: usize, parent: &[usize]) -> Result<()> {
            if self.chosen.len() == self.need {
                self.out.count += 1;
                if self.out.count > self.limit as u128 {
                    return Err(Error::BudgetExceeded {
                        what: "spanning trees",
                        limit: self.limit,
                    });
                }
                if let Some(t) = self.out.trees.as_mut() {
                    t.push(self.chosen.clone());
                }
                return Ok(());
            }
            let remaining = self.need - self.chosen.len();
            for i in start..self.edges.len() {
                if self.edges.len() - i < remaining {
                    break;
                }
                let (u, v) = self.edges[i];
                let mut p = parent.to_vec();
                let (ru, rv) = (find(&mut p, u), find(&mut p, v));
                if ru == rv {
                    continue;
                }
                p[ru] = rv;
                self.chosen.push(i);
                self.go(i + 1, &p)?;
                self.chosen.pop();
            }
            Ok(())
        }
    }

    let parent: Vec<usize> = (0..n).collect();
    let mut search = Search {
        edges: &edges,
        need: n - 1,
        limit: budget.max_trees,
        chosen: Vec::new(),
        out: &mut out,
    };
    search.go(0, &parent)?;
    Ok(out)
}

/// Spanning-tree count by the deletion-contraction recurrence
/// `τ(G) = τ(G − e) + m(e)·τ(G / e)`, memoised on the weighted edge list.
pub fn count_spanning_trees_deletion_contraction<G: Topology>(g: &G, budget: &EnumerationBudget) -> Result<u128> {
    budget.check_nodes(g.node_count())?;
    let edges: Vec<(usize, usize, u64)> = g.weighted_edges();
    let mg = MultiGraph::from_weighted_edges(g.node_count(), &edges)?;
    let mut memo = HashMap::new();
    Ok(dc(&mg, &mut memo))
}

fn dc(g: &MultiGraph, memo: &mut HashMap<(usize, Vec<(usize, usize, u64)>), u128>) -> u128 {
    let n = g.node_count();
    if n <= 1 {
        return 1;
    }
    let edges = g.weighted_edges();
    let key = (n, edges.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let value = if !g.is_connected() {
        0
    } else {
        let (u, v, m) = edges[0];
        let deleted = g.delete_pair(u, v).expect("pair present");
        let contracted = g.contract_edge(u, v).expect("pair present");
        dc(&deleted, memo) + m as u128 * dc(&contracted, memo)
    };
    memo.insert(key, value);
    value
}

/// Whether a spanning tree, given by its edges, is compatible with `p`:
/// exactly `N − K` of its edges join nodes of the same cluster.
pub fn tree_is_compatible(tree: &[(usize, usize)], p: &Partition) -> bool {
    let inside = tree
        .iter()
        .filter(|&&(u, v)| p.cluster_of(u) == p.cluster_of(v))
        .count();
    inside == p.node_count() - p.k()
}

/// Number of spanning trees of `g` compatible with `p`, by enumeration.
pub fn count_compatible_trees(g: &ContiguityGraph, p: &Partition, budget: &EnumerationBudget) -> Result<u128> {
    let st = enumerate_spanning_trees(g, budget, true)?;
    let trees = st.trees.expect("list requested");
    let count = trees
        .iter()
        .filter(|t| {
            let edges: Vec<_> = t.iter().map(|&i| st.edges[i]).collect();
            tree_is_compatible(&edges, p)
        })
        .count();
    Ok(count as u128)
}

/// All partitions of `g` into exactly `k` connected clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatiblePartitions {
    /// One representative per unordered partition.
    pub partitions: Vec<Partition>,
    /// Number of ordered (labelled) partitions, `K!` per unordered one.
    pub ordered_len: u128,
}

/// Enumerates restricted-growth label strings and keeps those whose clusters
/// are all connected.
pub fn enumerate_compatible_partitions(
    g: &ContiguityGraph,
    k: usize,
    budget: &EnumerationBudget,
) -> Result<CompatiblePartitions> {
    let n = g.node_count();
    budget.check_nodes(n)?;
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            what: "cluster count",
            value: k as f64,
        });
    }
    let mut labels = vec![0usize; n];
    let mut found = Vec::new();
    let mut visited = 0usize;
    rgs(g, k, 1, 1, &mut labels, &mut found, &mut visited, budget)?;
    let k_fact: u128 = (1..=k as u128).product();
    let ordered_len = found.len() as u128 * k_fact;
    Ok(CompatiblePartitions {
        partitions: found,
        ordered_len,
    })
}

#[allow(clippy::too_many_arguments)]
fn rgs(
    g: &ContiguityGraph,
    k: usize,
    pos: usize,
    used: usize,
    labels: &mut Vec<usize>,
    found: &mut Vec<Partition>,
    visited: &mut usize,
    budget: &EnumerationBudget,
) -> Result<()> {
    let n = labels.len();
    if used + (n - pos) < k {
        return Ok(());
    }
    if pos == n {
        if used != k {
            return Ok(());
        }
        *visited += 1;
        if *visited > budget.max_partitions {
            return Err(Error::BudgetExceeded {
                what: "partitions",
                limit: budget.max_partitions,
            });
        }
        let p = Partition::from_labels(labels);
        if p.first_disconnected_cluster(g)?.is_none() {
            found.push(p);
        }
        return Ok(());
    }
    for label in 0..=used.min(k - 1) {
        labels[pos] = label;
        rgs(g, k, pos + 1, used.max(label + 1), labels, found, visited, budget)?;
    }
    Ok(())
}

/// Partition prior computed from enumerated spanning trees.
pub fn oracle_log_partition_prior(g: &ContiguityGraph, p: &Partition, budget: &EnumerationBudget) -> Result<f64> {
    let st = enumerate_spanning_trees(g, budget, true)?;
    let trees = st.trees.expect("list requested");
    let compatible = trees
        .iter()
        .filter(|t| {
            let edges: Vec<_> = t.iter().map(|&i| st.edges[i]).collect();
            tree_is_compatible(&edges, p)
        })
        .count();
    if compatible == 0 {
        return Err(Error::InfeasiblePartition { cluster: 0 });
    }
    let (n, k) = (p.node_count() as u128, p.k() as u128);
    let binom = binomial(n - 1, k - 1);
    let k_fact: u128 = (1..=k).product();
    let denom = st.count as f64 * binom as f64 * k_fact as f64;
    Ok((compatible as f64 / denom).ln())
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut r = 1u128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Posterior of `p` with the prior taken from enumeration.
pub fn oracle_log_posterior(
    x: ArrayView2<'_, f64>,
    g: &ContiguityGraph,
    p: &Partition,
    spec: &ModelSpec,
    alpha: f64,
    budget: &EnumerationBudget,
) -> Result<PosteriorValue> {
    let prior = oracle_log_partition_prior(g, p, budget)?;
    let mut obs = 0.0;
    for members in p.clusters() {
        obs += log_marginal(&suff_stats_of_rows(x, members, spec)?, spec)?;
    }
    Ok(PosteriorValue::new(obs, prior, log_k_prior(p.k(), p.node_count(), alpha)?))
}

/// Global maximiser over every compatible partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveMap {
    pub partition: Partition,
    pub value: PosteriorValue,
    /// Best partition and value for each `K = 1..=N` (index `K − 1`).
    pub per_k: Vec<(Partition, PosteriorValue)>,
}

pub fn exhaustive_map(
    x: ArrayView2<'_, f64>,
    g: &ContiguityGraph,
    spec: &ModelSpec,
    alpha: f64,
    budget: &EnumerationBudget,
) -> Result<ExhaustiveMap> {
    let n = g.node_count();
    if x.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.nrows(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let st = enumerate_spanning_trees(g, budget, true)?;
    let trees: Vec<Vec<(usize, usize)>> = st
        .trees
        .expect("list requested")
        .iter()
        .map(|t| t.iter().map(|&i| st.edges[i]).collect())
        .collect();
    let total = st.count as f64;
    let mut per_k = Vec::with_capacity(n);
    for k in 1..=n {
        let parts = enumerate_compatible_partitions(g, k, budget)?;
        let binom = binomial(n as u128 - 1, k as u128 - 1) as f64;
        let k_fact = (1..=k as u128).product::<u128>() as f64;
        let kp = log_k_prior(k, n, alpha)?;
        let mut best: Option<(Partition, PosteriorValue)> = None;
        for p in parts.partitions {
            let compatible = trees.iter().filter(|t| tree_is_compatible(t, &p)).count() as f64;
            let prior = (compatible / (total * binom * k_fact)).ln();
            let mut obs = 0.0;
            for members in p.clusters() {
                obs += log_marginal(&suff_stats_of_rows(x, members, spec)?, spec)?;
            }
            let value = PosteriorValue::new(obs, prior, kp);
            if best.as_ref().is_none_or(|(_, b)| value.total > b.total) {
                best = Some((p, value));
            }
        }
        per_k.push(best.expect("every connected graph has a K-partition"));
    }
    let (partition, value) = per_k
        .iter()
        .fold(None::<&(Partition, PosteriorValue)>, |acc, cand| match acc {
            Some(a) if a.1.total >= cand.1.total => Some(a),
            _ => Some(cand),
        })
        .cloned()
        .expect("n >= 1");
    Ok(ExhaustiveMap {
        partition,
        value,
        per_k,
    })
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive bisection driven by the Kronrod-Gauss error estimate.
fn adaptive(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.abs() || err < 1e-300 {
            return Ok(total);
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "error estimate {err:e} above tolerance after {MAX_INTERVALS} subintervals"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// `log ∫ exp(logf(t)) dt` over the real line. The peak is located by a
/// coarse scan of `centre ± 60·scale`, the bracket grown until the integrand
/// has fallen by `e^-60`, and the scaled integrand integrated adaptively.
/// The relative tolerance is never tighter than the rounding floor set by the
/// size of the log-integrand.
fn log_integrate(logf: &mut dyn FnMut(f64) -> f64, centre: f64, scale: f64, rel_tol: f64) -> Result<f64> {
    const DROP: f64 = 60.0;
    let mut best_t = centre;
    let mut peak = f64::NEG_INFINITY;
    for i in -240..=240 {
        let t = centre + scale * i as f64 / 4.0;
        let v = logf(t);
        if v > peak {
            peak = v;
            best_t = t;
        }
    }
    if !peak.is_finite() {
        return Err(Error::Quadrature("integrand has no finite values on the scan".into()));
    }
    let step = scale / 4.0;
    let mut lo = best_t;
    let mut guard = 0;
    while logf(lo) > peak - DROP {
        lo -= step;
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Quadrature("lower bracket did not close".into()));
        }
    }
    let mut hi = best_t;
    guard = 0;
    while logf(hi) > peak - DROP {
        hi += step;
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Quadrature("upper bracket did not close".into()));
        }
    }
    // exp(logf − peak) carries rounding noise of order eps·|peak|; asking
    // for more relative accuracy than that cannot converge.
    let floor = 1e3 * f64::EPSILON * peak.abs();
    let mut scaled = |t: f64| (logf(t) - peak).exp();
    let integral = adaptive(&mut scaled, lo, hi, rel_tol.max(floor))?;
    Ok(peak + integral.ln())
}

/// Normal-Gamma prior hyperparameters for one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalGamma1d {
    pub mu0: f64,
    pub tau: f64,
    pub kappa: f64,
    pub beta: f64,
}

/// Full (base measure included) log marginal of 1-d Gaussian data under a
/// Normal-Gamma prior, by 2-d quadrature of
/// `∫∫ Π N(xᵢ | μ, 1/V) N(μ | μ0, 1/(τV)) Gamma(V | κ, β) dμ dV`
/// over `(μ, log V)`.
pub fn quadrature_marginal(points: &[f64], h: &NormalGamma1d) -> Result<f64> {
    if points.len() > 10 {
        return Err(Error::BudgetExceeded {
            what: "quadrature points",
            limit: 10,
        });
    }
    if points.is_empty() {
        return Ok(0.0);
    }
    let ln2pi = (2.0 * std::f64::consts::PI).ln();
    let n = points.len() as f64;
    let sum: f64 = points.iter().sum();
    let mean = sum / n;
    let scatter: f64 = points.iter().map(|x| (x - mean) * (x - mean)).sum();
    let mu_centre = (sum + h.tau * h.mu0) / (n + h.tau);
    let log_gamma_norm = h.kappa * h.beta.ln() - ln_gamma(h.kappa);

    let mut failure: Option<Error> = None;
    let mut outer = |s: f64| -> f64 {
        let v = s.exp();
        // Σ(xᵢ − μ)² = Σ(xᵢ − x̄)² + n(x̄ − μ)²; the μ-free part stays
        // outside so the inner log-integrand is O(1) near its peak.
        let outside = 0.5 * n * (s - ln2pi) - 0.5 * v * scatter;
        let mut inner = |mu: f64| -> f64 {
            -0.5 * v * n * (mean - mu) * (mean - mu) + 0.5 * (h.tau * v).ln()
                - 0.5 * ln2pi
                - 0.5 * h.tau * v * (mu - h.mu0) * (mu - h.mu0)
        };
        let scale = 1.0 / (v * (n + h.tau)).sqrt();
        match log_integrate(&mut inner, mu_centre, scale, 1e-8) {
            // Gamma density in V times the Jacobian dV = V ds.
            Ok(l) => outside + l + log_gamma_norm + (h.kappa - 1.0) * s - h.beta * v + s,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };
    let centre = (h.kappa / h.beta).ln();
    let result = log_integrate(&mut outer, centre, 0.5, 1e-7);
    if let Some(e) = failure {
        return Err(e);
    }
    result
}

/// Log density of a Student-t with `nu` degrees of freedom, location `loc`
/// and squared scale `scale2`.
fn student_t_ln_pdf(x: f64, nu: f64, loc: f64, scale2: f64) -> f64 {
    let z = (x - loc) * (x - loc) / (nu * scale2);
    ln_gamma(0.5 * (nu + 1.0))
        - ln_gamma(0.5 * nu)
        - 0.5 * (nu * std::f64::consts::PI * scale2).ln()
        - 0.5 * (nu + 1.0) * z.ln_1p()
}

/// The same marginal as [`quadrature_marginal`], factorised as a product of
/// one-step-ahead Student-t predictives.
pub fn sequential_student_t_marginal(points: &[f64], h: &NormalGamma1d) -> f64 {
    let (mut mu, mut tau, mut kappa, mut beta) = (h.mu0, h.tau, h.kappa, h.beta);
    let mut acc = 0.0;
    for &x in points {
        acc += student_t_ln_pdf(x, 2.0 * kappa, mu, beta * (tau + 1.0) / (kappa * tau));
        beta += 0.5 * tau * (x - mu) * (x - mu) / (tau + 1.0);
        mu = (tau * mu + x) / (tau + 1.0);
        tau += 1.0;
        kappa += 0.5;
    }
    acc
}

/// `ln (a)(a+1)…(a+m−1)` as an explicit product.
fn ln_rising(a: f64, m: u64) -> f64 {
    (0..m).map(|i| (a + i as f64).ln()).sum()
}

/// Full log marginal of count vectors under a Dirichlet-multinomial, by
/// rising factorials (the Pólya urn).
pub fn rising_factorial_dirichlet_marginal(rows: &[Vec<u64>], concentration: &[f64]) -> f64 {
    let mut totals = vec![0u64; concentration.len()];
    let mut base = 0.0;
    for row in rows {
        let n: u64 = row.iter().sum();
        base += ln_rising(1.0, n) - row.iter().map(|&c| ln_rising(1.0, c)).sum::<f64>();
        for (t, &c) in totals.iter_mut().zip(row) {
            *t += c;
        }
    }
    let a0: f64 = concentration.iter().sum();
    let grand: u64 = totals.iter().sum();
    let mut acc = base - ln_rising(a0, grand);
    for (&a, &t) in concentration.iter().zip(&totals) {
        acc += ln_rising(a, t);
    }
    acc
}

/// Full log marginal of Poisson counts under a Gamma prior, as a product of
/// negative-binomial one-step predictives.
pub fn sequential_poisson_marginal(points: &[u64], shape: f64, rate: f64) -> f64 {
    let (mut a, mut b) = (shape, rate);
    let mut acc = 0.0;
    for &x in points {
        acc += ln_rising(a, x) - ln_rising(1.0, x) + a * (b / (b + 1.0)).ln() - x as f64 * (b + 1.0).ln();
        a += x as f64;
        b += 1.0;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn budget() -> EnumerationBudget {
        EnumerationBudget::default()
    }

    fn c4() -> ContiguityGraph {
        ContiguityGraph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn small_tree_counts() {
        let k4 = ContiguityGraph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(enumerate_spanning_trees(&k4, &budget(), false).unwrap().count, 16);
        assert_eq!(count_spanning_trees_deletion_contraction(&k4, &budget()).unwrap(), 16);
        assert_eq!(enumerate_spanning_trees(&c4(), &budget(), false).unwrap().count, 4);
        let triple = MultiGraph::from_weighted_edges(2, &[(0, 1, 3)]).unwrap();
        assert_eq!(enumerate_spanning_trees(&triple, &budget(), true).unwrap().count, 3);
        assert_eq!(count_spanning_trees_deletion_contraction(&triple, &budget()).unwrap(), 3);
    }

    #[test]
    fn budgets_are_hard() {
        let g = ContiguityGraph::grid(3, 3, crate::graph::Adjacency::Rook).unwrap();
        assert!(matches!(
            enumerate_spanning_trees(&g, &budget(), false),
            Err(Error::BudgetExceeded { .. })
        ));
        let tight = EnumerationBudget {
            max_nodes: 9,
            max_trees: 10,
            max_partitions: 10,
        };
        assert!(matches!(
            enumerate_spanning_trees(&g, &tight, false),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(enumerate_compatible_partitions(&g, 3, &tight).is_err());
    }

    #[test]
    fn cycle_two_splits() {
        let parts = enumerate_compatible_partitions(&c4(), 2, &budget()).unwrap();
        assert_eq!(parts.partitions.len(), 6);
        assert_eq!(parts.ordered_len, 12);
        assert_eq!(enumerate_compatible_partitions(&c4(), 1, &budget()).unwrap().partitions.len(), 1);
        let path = ContiguityGraph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(enumerate_compatible_partitions(&path, 2, &budget()).unwrap().partitions.len(), 4);
    }

    #[test]
    fn cycle_prior_by_enumeration() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        assert_eq!(count_compatible_trees(&c4(), &p, &budget()).unwrap(), 2);
        assert_abs_diff_eq!(
            oracle_log_partition_prior(&c4(), &p, &budget()).unwrap(),
            (1.0f64 / 12.0).ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn two_point_map() {
        let g = ContiguityGraph::from_edge_list(2, &[(0, 1)]).unwrap();
        let same = array![[1.0], [1.0]];
        let spec = ModelSpec::gaussian_diag(vec![1.0], 0.01, 1.0, vec![0.1]).unwrap();
        assert_eq!(exhaustive_map(same.view(), &g, &spec, 1.0, &budget()).unwrap().partition.k(), 1);
        let far = array![[0.0], [100.0]];
        let spec = crate::models::default_hyperparams(far.view(), crate::models::Variant::GaussianDiag).unwrap();
        assert_eq!(exhaustive_map(far.view(), &g, &spec, 1.0, &budget()).unwrap().partition.k(), 2);
    }

    #[test]
    fn quadrature_matches_predictive_product() {
        let h = NormalGamma1d {
            mu0: 0.0,
            tau: 1.0,
            kappa: 1.0,
            beta: 1.0,
        };
        assert_eq!(quadrature_marginal(&[], &h).unwrap(), 0.0);
        let q = quadrature_marginal(&[0.0], &h).unwrap();
        assert_abs_diff_eq!(q, sequential_student_t_marginal(&[0.0], &h), epsilon = 1e-4);

        let pts = [0.3, -1.2, 2.5, 0.7];
        let neg: Vec<f64> = pts.iter().map(|v| -v).collect();
        let a = quadrature_marginal(&pts, &h).unwrap();
        let b = quadrature_marginal(&neg, &h).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-6 * a.abs().max(1.0));
        assert_abs_diff_eq!(a, sequential_student_t_marginal(&pts, &h), epsilon = 1e-5);
    }

    #[test]
    fn count_model_oracles_agree_with_closed_form() {
        let rows = vec![vec![1u64, 0, 2], vec![0, 3, 1]];
        let alpha = [1.0, 0.5, 2.0];
        let spec = ModelSpec::multinomial_dirichlet(alpha.to_vec()).unwrap();
        let x = array![[1.0, 0.0, 2.0], [0.0, 3.0, 1.0]];
        let closed = log_marginal(&suff_stats_of_rows(x.view(), &[0, 1], &spec).unwrap(), &spec).unwrap()
            + crate::models::log_base_measure(x.row(0), &spec)
            + crate::models::log_base_measure(x.row(1), &spec);
        assert_abs_diff_eq!(rising_factorial_dirichlet_marginal(&rows, &alpha), closed, epsilon = 1e-10);

        let spec = ModelSpec::poisson_gamma(vec![2.0], vec![0.5]).unwrap();
        let x = array![[3.0], [0.0], [5.0]];
        let closed = log_marginal(&suff_stats_of_rows(x.view(), &[0, 1, 2], &spec).unwrap(), &spec).unwrap()
            + (0..3).map(|i| crate::models::log_base_measure(x.row(i), &spec)).sum::<f64>();
        assert_abs_diff_eq!(sequential_poisson_marginal(&[3, 0, 5], 2.0, 0.5), closed, epsilon = 1e-10);
    }
}
