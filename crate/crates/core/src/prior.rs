//! Partition prior, cluster-count prior and the assembled log posterior.

use ndarray::ArrayView2;
use statrs::function::factorial::{ln_binomial, ln_factorial};

use crate::error::{Error, Result};
use crate::graph::{ContiguityGraph, Partition, Topology};
use crate::models::{log_marginal, suff_stats_of_rows, ModelSpec};
use crate::treecount::{log_compatible_tree_count, log_tree_count};

/// Below this distance from 1 the uniform branch of the K prior is used.
pub const ALPHA_ONE_TOL: f64 = 1e-12;

/// Un-normalised log posterior of one partition, split into its terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorValue {
    pub log_obs: f64,
    pub log_partition_prior: f64,
    pub log_k_prior: f64,
    pub total: f64,
}

impl PosteriorValue {
    pub fn new(log_obs: f64, log_partition_prior: f64, log_k_prior: f64) -> Self {
        Self {
            log_obs,
            log_partition_prior,
            log_k_prior,
            total: log_obs + log_partition_prior + log_k_prior,
        }
    }

    /// The α-free part `log_obs + log_partition_prior`.
    pub fn intercept(&self) -> f64 {
        self.log_obs + self.log_partition_prior
    }
}

/// `−log C(N−1, K−1) − log K!`, the label-and-cut normalisation of the
/// partition prior.
pub fn log_prior_normaliser(n: usize, k: usize) -> f64 {
    debug_assert!(1 <= k && k <= n);
    -ln_binomial((n - 1) as u64, (k - 1) as u64) - ln_factorial(k as u64)
}

/// Partition prior from its tree-count terms.
pub fn log_partition_prior_from_counts(log_compatible: f64, log_total: f64, n: usize, k: usize) -> f64 {
    log_compatible - log_total + log_prior_normaliser(n, k)
}

/// `log p(c | G, K)`: the fraction of spanning trees of `g` compatible with
/// `p`, divided by the number of ways to cut `K−1` tree edges and label the
/// pieces.
///
/// A cluster that does not induce a connected subgraph has probability zero;
/// that case is reported as [`Error::InfeasiblePartition`].
pub fn log_partition_prior(g: &ContiguityGraph, p: &Partition) -> Result<f64> {
    if p.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: p.node_count(),
        });
    }
    let total = log_tree_count(g)?.value();
    let compatible = log_compatible_tree_count(g, p)?.value();
    Ok(log_partition_prior_from_counts(compatible, total, g.node_count(), p.k()))
}

/// Truncated geometric prior on the number of clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPrior {
    alpha: f64,
    n: usize,
}

impl KPrior {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::OutOfRange { what: "alpha", value: alpha });
        }
        if n == 0 {
            return Err(Error::EmptyInput("cluster-count prior over zero nodes"));
        }
        Ok(Self { alpha, n })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_mass(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.n {
            return Err(Error::OutOfRange {
                what: "cluster count",
                value: k as f64,
            });
        }
        let n = self.n as f64;
        if (1.0 - self.alpha).abs() < ALPHA_ONE_TOL {
            return Ok(-n.ln());
        }
        let log_alpha = (self.alpha - 1.0).ln_1p();
        let log_one_minus = (1.0 - self.alpha).ln();
        let log_norm = (-(n * log_alpha).exp_m1()).ln();
        Ok((k - 1) as f64 * log_alpha + log_one_minus - log_norm)
    }
}

/// `log p(K = k | α)` for `k` in `1..=n`.
pub fn log_k_prior(k: usize, n: usize, alpha: f64) -> Result<f64> {
    KPrior::new(alpha, n)?.log_mass(k)
}

/// Sum of cluster log marginals of `p`.
pub fn log_obs(x: ArrayView2<'_, f64>, p: &Partition, spec: &ModelSpec) -> Result<f64> {
    if x.nrows() != p.node_count() {
        return Err(Error::DimensionMismatch {
            expected: p.node_count(),
            found: x.nrows(),
        });
    }
    p.clusters().iter().try_fold(0.0, |acc, members| {
        Ok(acc + log_marginal(&suff_stats_of_rows(x, members, spec)?, spec)?)
    })
}

/// Exact un-normalised log posterior of `p`.
pub fn log_posterior(
    x: ArrayView2<'_, f64>,
    g: &ContiguityGraph,
    p: &Partition,
    spec: &ModelSpec,
    alpha: f64,
) -> Result<PosteriorValue> {
    let prior = log_partition_prior(g, p)?;
    let obs = log_obs(x, p, spec)?;
    let kp = log_k_prior(p.k(), p.node_count(), alpha)?;
    Ok(PosteriorValue::new(obs, prior, kp))
}
