//! Greedy agglomerative engine.
//!
//! The forward pass starts from singletons and repeatedly merges the pair of
//! adjacent clusters with the largest lower-bound score, a quantity that only
//! depends on the two clusters involved. The backward pass then walks the
//! merge tree from one cluster back to `N`, keeping a factor of the quotient
//! multigraph's Laplacian up to date, and records the exact log posterior of
//! every intermediate partition.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use ndarray::ArrayView2;

use crate::error::{Error, Result};
use crate::graph::{ContiguityGraph, MultiGraph, Partition, Topology};
use crate::models::{combine, log_marginal, suff_stats, ModelSpec, SuffStats};
use crate::prior::{log_k_prior, log_prior_normaliser, PosteriorValue};
use crate::treecount::{ldl_factorize, merge_factors, LdlFactor, LogTreeCount};

/// A live cluster during the forward pass.
#[derive(Debug, Clone)]
pub struct ClusterState {
    /// Member nodes; position `i` is local label `i` of `factor`.
    pub members: Vec<usize>,
    pub stats: SuffStats,
    pub log_obs: f64,
    pub factor: LdlFactor,
    pub log_intra_trees: LogTreeCount,
    pub version: u64,
}

impl ClusterState {
    pub fn singleton(node: usize, x: ArrayView2<'_, f64>, spec: &ModelSpec, version: u64) -> Result<Self> {
        let stats = suff_stats(x.row(node), spec)?;
        let log_obs = log_marginal(&stats, spec)?;
        let factor = ldl_factorize(&MultiGraph::empty(1))?;
        Ok(Self {
            members: vec![node],
            stats,
            log_obs,
            log_intra_trees: LogTreeCount(0.0),
            factor,
            version,
        })
    }
}

/// Merge score of `a` and `b` that depends on the two clusters only:
/// `ΔL_obs + log |T(a∪b)| − log |cut| − log |T(a)| − log |T(b)|`.
///
/// The exact change in log posterior also contains the quotient ratio
/// `|T(G◇c / (a,b))| / |T(G◇c)|`, replaced here by `1 / |cut|`, and a term
/// shared by every pair at a given K. By deletion-contraction the ratio is at
/// most `1 / |cut|`, with equality when `(a, b)` is a bridge of the quotient.
///
/// `cut_edges` are the crossing edges as `(local label in a, local label in
/// b)`. Returns the score together with the union's factor, whose local
/// labels are `a`'s members followed by `b`'s.
pub fn delta_bound(
    a: &ClusterState,
    b: &ClusterState,
    cut_edges: &[(usize, usize)],
    spec: &ModelSpec,
) -> Result<(f64, LdlFactor, SuffStats, f64)> {
    if cut_edges.is_empty() {
        return Err(Error::Disconnected);
    }
    let union = merge_factors(&a.factor, &b.factor, cut_edges)?;
    let stats = combine(&a.stats, &b.stats)?;
    let log_obs = log_marginal(&stats, spec)?;
    let score = log_obs - a.log_obs - b.log_obs + union.log_det()
        - (cut_edges.len() as f64).ln()
        - a.log_intra_trees.value()
        - b.log_intra_trees.value();
    Ok((score, union, stats, log_obs))
}

/// One accepted merge; cluster ids below `N` are the singletons, the merge at
/// `step` creates cluster `N + step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub step: usize,
    pub g: usize,
    pub h: usize,
    pub new_id: usize,
    pub bound_score: f64,
}

/// Work counters of a forward pass.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineCounters {
    /// Candidates scored after each merge.
    pub scored_per_step: Vec<usize>,
    /// Quotient degree of the new cluster after each merge.
    pub neighbors_per_step: Vec<usize>,
    pub initial_candidates: usize,
    pub stale_pops: usize,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

/// Result of a clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    pub n: usize,
    pub merges: Vec<Merge>,
    /// `per_k[k − 1]` is the exact posterior of the `k`-cluster partition.
    pub per_k: Vec<PosteriorValue>,
    pub map_k: usize,
    pub alpha: f64,
    /// Log marginal of every cluster id ever created.
    pub cluster_log_obs: Vec<f64>,
    /// Log intra-cluster spanning-tree count of every cluster id.
    pub cluster_log_trees: Vec<f64>,
    pub counters: EngineCounters,
}

impl Hierarchy {
    pub fn log_tree_count_graph(&self) -> f64 {
        *self.cluster_log_trees.last().expect("at least one cluster")
    }

    /// The two children of a merged cluster id, `None` for a leaf.
    pub fn children(&self, id: usize) -> Option<(usize, usize)> {
        (id >= self.n).then(|| {
            let m = &self.merges[id - self.n];
            (m.g, m.h)
        })
    }

    /// Leaves under a cluster id, in merge order (left child first).
    pub fn members_of(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            match self.children(c) {
                Some((g, h)) => {
                    stack.push(h);
                    stack.push(g);
                }
                None => out.push(c),
            }
        }
        out
    }

    /// Cluster ids alive once the first `n − k` merges are applied, sorted.
    pub fn clusters_at_k(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 || k > self.n {
            return Err(Error::OutOfRange {
                what: "cluster count",
                value: k as f64,
            });
        }
        let mut alive = vec![true; self.n + self.merges.len()];
        alive[self.n..].iter_mut().for_each(|a| *a = false);
        for m in &self.merges[..self.n - k] {
            alive[m.g] = false;
            alive[m.h] = false;
            alive[m.new_id] = true;
        }
        Ok((0..alive.len()).filter(|&i| alive[i]).collect())
    }

    /// Posterior values re-weighted for another K-prior parameter.
    pub fn with_alpha(&self, alpha: f64) -> Result<Hierarchy> {
        let mut out = self.clone();
        for (i, pv) in out.per_k.iter_mut().enumerate() {
            *pv = PosteriorValue::new(pv.log_obs, pv.log_partition_prior, log_k_prior(i + 1, self.n, alpha)?);
        }
        out.alpha = alpha;
        out.map_k = argmax_k(&out.per_k);
        Ok(out)
    }
}

/// Partition obtained by replaying the first `n − k` merges, clusters
/// ordered by smallest member.
pub fn cut_at_k(h: &Hierarchy, k: usize) -> Result<Partition> {
    let ids = h.clusters_at_k(k)?;
    let clusters = ids.iter().map(|&id| h.members_of(id)).collect();
    Ok(Partition::from_clusters(h.n, clusters)?.canonical())
}

fn argmax_k(per_k: &[PosteriorValue]) -> usize {
    let mut best = 0;
    for (i, pv) in per_k.iter().enumerate() {
        if pv.total > per_k[best].total {
            best = i;
        }
    }
    best + 1
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    score: f64,
    g: usize,
    h: usize,
    stamp: (u64, u64),
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Max-heap order: highest score, then smallest (g, h).
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| (Reverse(self.g), Reverse(self.h)).cmp(&(Reverse(other.g), Reverse(other.h))))
    }
}

struct Scored {
    factor: LdlFactor,
    stats: SuffStats,
    log_obs: f64,
}

/// Least-recently-used store of union factors keyed by cluster pair.
struct UnionCache {
    entries: BTreeMap<(usize, usize), (u64, Scored)>,
    by_tick: BTreeMap<u64, (usize, usize)>,
    tick: u64,
}

impl UnionCache {
    fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
            by_tick: BTreeMap::new(),
            tick: 0,
        }
    }

    fn insert(&mut self, key: (usize, usize), value: Scored, capacity: usize) {
        self.tick += 1;
        if let Some((old, _)) = self.entries.insert(key, (self.tick, value)) {
            self.by_tick.remove(&old);
        }
        self.by_tick.insert(self.tick, key);
        while self.entries.len() > capacity.max(1) {
            let (_, victim) = self.by_tick.pop_first().expect("non-empty");
            self.entries.remove(&victim);
        }
    }

    fn take(&mut self, key: (usize, usize)) -> Option<Scored> {
        let (tick, value) = self.entries.remove(&key)?;
        self.by_tick.remove(&tick);
        Some(value)
    }

    fn evict_cluster(&mut self, id: usize) {
        let dead: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter(|&&(a, b)| a == id || b == id)
            .copied()
            .collect();
        for key in dead {
            self.take(key);
        }
    }

}

/// Forward-pass state. Exposed so tests can step through merges and rescore
/// every live pair.
pub struct Engine<'a> {
    g: &'a ContiguityGraph,
    spec: &'a ModelSpec,
    n: usize,
    clusters: Vec<Option<ClusterState>>,
    assign: Vec<usize>,
    local: Vec<usize>,
    /// Quotient multigraph keyed by cluster id.
    quotient: BTreeMap<usize, BTreeMap<usize, u64>>,
    heap: BinaryHeap<Candidate>,
    cache: UnionCache,
    merges: Vec<Merge>,
    log_obs: Vec<f64>,
    log_trees: Vec<f64>,
    /// Adjacent cluster pairs, i.e. live candidates.
    pair_count: usize,
    next_version: u64,
    counters: EngineCounters,
}

impl<'a> Engine<'a> {
    pub fn new(x: ArrayView2<'a, f64>, g: &'a ContiguityGraph, spec: &'a ModelSpec) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::EmptyInput("graph has no nodes"));
        }
        if x.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.nrows(),
            });
        }
        if x.ncols() != spec.dims() {
            return Err(Error::DimensionMismatch {
                expected: spec.dims(),
                found: x.ncols(),
            });
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut clusters = Vec::with_capacity(2 * n - 1);
        let mut log_obs = Vec::with_capacity(2 * n - 1);
        for v in 0..n {
            let c = ClusterState::singleton(v, x, spec, v as u64)?;
            log_obs.push(c.log_obs);
            clusters.push(Some(c));
        }
        let mut quotient: BTreeMap<usize, BTreeMap<usize, u64>> = (0..n).map(|v| (v, BTreeMap::new())).collect();
        for &(u, v) in g.edges() {
            quotient.get_mut(&u).unwrap().insert(v, 1);
            quotient.get_mut(&v).unwrap().insert(u, 1);
        }
        let mut engine = Self {
            g,
            spec,
            n,
            clusters,
            assign: (0..n).collect(),
            local: vec![0; n],
            quotient,
            heap: BinaryHeap::new(),
            cache: UnionCache::new(),
            merges: Vec::with_capacity(n - 1),
            log_obs,
            log_trees: vec![0.0; n],
            pair_count: g.edge_count(),
            next_version: n as u64,
            counters: EngineCounters::default(),
        };
        for &(u, v) in g.edges() {
            engine.score_pair(u, v)?;
        }
        engine.counters.initial_candidates = g.edge_count();
        Ok(engine)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn counters(&self) -> &EngineCounters {
        &self.counters
    }

    /// Ids of the clusters currently alive.
    pub fn live_clusters(&self) -> Vec<usize> {
        self.quotient.keys().copied().collect()
    }

    pub fn cluster(&self, id: usize) -> Option<&ClusterState> {
        self.clusters.get(id).and_then(|c| c.as_ref())
    }

    /// Current partition, clusters ordered by smallest member.
    pub fn partition(&self) -> Partition {
        Partition::from_labels(&self.assign).canonical()
    }

    /// Quotient multiplicity between two live clusters.
    pub fn quotient_multiplicity(&self, a: usize, b: usize) -> u64 {
        self.quotient.get(&a).and_then(|m| m.get(&b)).copied().unwrap_or(0)
    }

    /// Crossing edges of two live clusters in their local labels.
    pub fn cut_edges(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let ca = self.clusters[a].as_ref().expect("live cluster");
        let cb = self.clusters[b].as_ref().expect("live cluster");
        let mut out = Vec::new();
        if ca.members.len() <= cb.members.len() {
            for &v in &ca.members {
                for &u in self.g.adjacent(v) {
                    if self.assign[u] == b {
                        out.push((self.local[v], self.local[u]));
                    }
                }
            }
        } else {
            for &v in &cb.members {
                for &u in self.g.adjacent(v) {
                    if self.assign[u] == a {
                        out.push((self.local[u], self.local[v]));
                    }
                }
            }
            out.sort_unstable();
        }
        out
    }

    /// Bound score of every live adjacent pair, recomputed from scratch.
    pub fn rescore_all(&self) -> Result<Vec<((usize, usize), f64)>> {
        let mut out = Vec::new();
        for (&a, nbrs) in &self.quotient {
            for &b in nbrs.keys().filter(|&&b| b > a) {
                let cut = self.cut_edges(a, b);
                let (score, ..) = delta_bound(
                    self.clusters[a].as_ref().unwrap(),
                    self.clusters[b].as_ref().unwrap(),
                    &cut,
                    self.spec,
                )?;
                out.push(((a, b), score));
            }
        }
        Ok(out)
    }

    fn score_pair(&mut self, a: usize, b: usize) -> Result<()> {
        let (a, b) = (a.min(b), a.max(b));
        let cut = self.cut_edges(a, b);
        let ca = self.clusters[a].as_ref().expect("live cluster");
        let cb = self.clusters[b].as_ref().expect("live cluster");
        let (score, factor, stats, log_obs) = delta_bound(ca, cb, &cut, self.spec)?;
        let stamp = (ca.version, cb.version);
        self.cache.insert(
            (a, b),
            Scored {
                factor,
                stats,
                log_obs,
            },
            2 * self.pair_count,
        );
        self.heap.push(Candidate { score, g: a, h: b, stamp });
        Ok(())
    }

    fn is_valid(&self, c: &Candidate) -> bool {
        matches!(
            (&self.clusters[c.g], &self.clusters[c.h]),
            (Some(a), Some(b)) if a.version == c.stamp.0 && b.version == c.stamp.1
        )
    }

    /// Performs the best valid merge; `None` once one cluster remains.
    pub fn step(&mut self) -> Result<Option<Merge>> {
        let best = loop {
            match self.heap.pop() {
                None => return Ok(None),
                Some(c) if self.is_valid(&c) => break c,
                Some(_) => self.counters.stale_pops += 1,
            }
        };
        let (g, h) = (best.g, best.h);
        let new_id = self.n + self.merges.len();

        let scored = match self.cache.take((g, h)) {
            Some(s) => {
                self.counters.cache_hits += 1;
                s
            }
            None => {
                self.counters.cache_misses += 1;
                let cut = self.cut_edges(g, h);
                let (_, factor, stats, log_obs) = delta_bound(
                    self.clusters[g].as_ref().unwrap(),
                    self.clusters[h].as_ref().unwrap(),
                    &cut,
                    self.spec,
                )?;
                Scored {
                    factor,
                    stats,
                    log_obs,
                }
            }
        };

        let cg = self.clusters[g].take().expect("live cluster");
        let ch = self.clusters[h].take().expect("live cluster");
        let mut members = cg.members;
        let offset = members.len();
        for (i, &v) in ch.members.iter().enumerate() {
            self.local[v] = offset + i;
        }
        members.extend_from_slice(&ch.members);
        for &v in &members {
            self.assign[v] = new_id;
        }
        let log_intra = scored.factor.log_tree_count();
        self.log_obs.push(scored.log_obs);
        self.log_trees.push(log_intra.value());
        self.clusters.push(Some(ClusterState {
            members,
            stats: scored.stats,
            log_obs: scored.log_obs,
            factor: scored.factor,
            log_intra_trees: log_intra,
            version: self.next_version,
        }));
        self.next_version += 1;
        self.cache.evict_cluster(g);
        self.cache.evict_cluster(h);

        // Contract g and h into new_id; parallel quotient edges to a common
        // neighbour collapse into one pair with summed multiplicity.
        let ng = self.quotient.remove(&g).unwrap_or_default();
        let nh = self.quotient.remove(&h).unwrap_or_default();
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for (c, m) in ng.into_iter().chain(nh) {
            if c != g && c != h {
                *merged.entry(c).or_insert(0) += m;
            }
        }
        for (&c, &m) in &merged {
            let nb = self.quotient.get_mut(&c).expect("live neighbour");
            nb.remove(&g);
            nb.remove(&h);
            nb.insert(new_id, m);
        }
        let neighbours: Vec<usize> = merged.keys().copied().collect();
        self.quotient.insert(new_id, merged);
        self.pair_count = self.quotient.values().map(|m| m.len()).sum::<usize>() / 2;

        for &c in &neighbours {
            self.score_pair(c, new_id)?;
        }
        self.counters.scored_per_step.push(neighbours.len());
        self.counters.neighbors_per_step.push(neighbours.len());

        let merge = Merge {
            step: self.merges.len(),
            g,
            h,
            new_id,
            bound_score: best.score,
        };
        self.merges.push(merge);
        Ok(Some(merge))
    }

    /// Runs the remaining merges and the backward pass.
    pub fn finish(mut self, alpha: f64) -> Result<Hierarchy> {
        while self.step()?.is_some() {}
        if self.merges.len() != self.n - 1 {
            return Err(Error::Disconnected);
        }
        let mut h = Hierarchy {
            n: self.n,
            merges: self.merges,
            per_k: Vec::new(),
            map_k: 1,
            alpha,
            cluster_log_obs: self.log_obs,
            cluster_log_trees: self.log_trees,
            counters: self.counters,
        };
        fill_per_k(&mut h, self.g, alpha)?;
        Ok(h)
    }
}

/// Forward pass followed by the backward pass at `alpha = 1`.
pub fn fit(x: ArrayView2<'_, f64>, g: &ContiguityGraph, spec: &ModelSpec) -> Result<Hierarchy> {
    Engine::new(x, g, spec)?.finish(1.0)
}

/// Recomputes the exact per-K posteriors of `h` for `alpha`. Cluster
/// marginals are re-derived from `x`; intra-cluster tree counts come from the
/// forward pass.
pub fn backward_pass(
    h: &Hierarchy,
    g: &ContiguityGraph,
    x: ArrayView2<'_, f64>,
    spec: &ModelSpec,
    alpha: f64,
) -> Result<Hierarchy> {
    if h.merges.len() + 1 != h.n || g.node_count() != h.n {
        return Err(Error::DimensionMismatch {
            expected: h.n,
            found: g.node_count(),
        });
    }
    if x.nrows() != h.n {
        return Err(Error::DimensionMismatch {
            expected: h.n,
            found: x.nrows(),
        });
    }
    let mut out = h.clone();
    let mut stats: Vec<SuffStats> = Vec::with_capacity(2 * h.n - 1);
    for v in 0..h.n {
        stats.push(suff_stats(x.row(v), spec)?);
    }
    for m in &h.merges {
        let s = combine(&stats[m.g], &stats[m.h])?;
        stats.push(s);
    }
    out.cluster_log_obs = stats.iter().map(|s| log_marginal(s, spec)).collect::<Result<_>>()?;
    fill_per_k(&mut out, g, alpha)?;
    Ok(out)
}

/// Walks the merge tree from the root down, splitting one cluster per step
/// and updating the quotient factor with rank-1 modifications.
fn fill_per_k(h: &mut Hierarchy, g: &ContiguityGraph, alpha: f64) -> Result<()> {
    let n = h.n;
    let total_ids = 2 * n - 1;
    let root = total_ids - 1;
    let log_tg = h.cluster_log_trees[root];

    let mut max_member: Vec<usize> = (0..n).collect();
    for m in &h.merges {
        max_member.push(max_member[m.g].max(max_member[m.h]));
    }

    let mut assign = vec![root; n];
    let mut label_of = vec![usize::MAX; total_ids];
    label_of[root] = 0;
    let mut at_label = vec![root];
    let mut factor = ldl_factorize(&MultiGraph::empty(1))?;
    let mut log_obs = h.cluster_log_obs[root];
    let mut intra = h.cluster_log_trees[root];

    let value = |k: usize, log_obs: f64, intra: f64, quotient: f64| -> Result<PosteriorValue> {
        let prior = intra + quotient - log_tg + log_prior_normaliser(n, k);
        Ok(PosteriorValue::new(log_obs, prior, log_k_prior(k, n, alpha)?))
    };

    let mut per_k = Vec::with_capacity(n);
    per_k.push(value(1, log_obs, intra, 0.0)?);
    for k in 1..n {
        let m = h.merges[n - 1 - k];
        let (keeper, other) = if max_member[m.g] > max_member[m.h] {
            (m.g, m.h)
        } else {
            (m.h, m.g)
        };
        let parent_label = label_of[m.new_id];
        label_of[keeper] = parent_label;
        at_label[parent_label] = keeper;

        for v in h.members_of(keeper) {
            assign[v] = keeper;
        }
        let other_members = h.members_of(other);
        for &v in &other_members {
            assign[v] = other;
        }
        let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
        for &v in &other_members {
            for &u in g.adjacent(v) {
                if assign[u] != other {
                    *mult.entry(assign[u]).or_insert(0) += 1;
                }
            }
        }

        let grounded_cluster = at_label[k - 1];
        let fresh = factor.insert_node();
        debug_assert_eq!(fresh, k - 1);
        at_label.push(grounded_cluster);
        label_of[grounded_cluster] = k;
        at_label[k - 1] = other;
        label_of[other] = k - 1;

        let adds: Vec<(usize, usize, u64)> = mult.iter().map(|(&c, &w)| (label_of[other], label_of[c], w)).collect();
        let removals: Vec<(usize, usize, u64)> = mult
            .iter()
            .filter(|(&c, _)| c != keeper)
            .map(|(&c, &w)| (label_of[keeper], label_of[c], w))
            .collect();
        factor.add_edges(&adds)?;
        factor.remove_edges(&removals)?;

        log_obs += h.cluster_log_obs[m.g] + h.cluster_log_obs[m.h] - h.cluster_log_obs[m.new_id];
        intra += h.cluster_log_trees[m.g] + h.cluster_log_trees[m.h] - h.cluster_log_trees[m.new_id];
        let q = factor.log_det();
        if !q.is_finite() {
            return Err(Error::Numeric(format!("quotient factor degenerate at K = {}", k + 1)));
        }
        per_k.push(value(k + 1, log_obs, intra, q)?);
    }
    h.map_k = argmax_k(&per_k);
    h.per_k = per_k;
    h.alpha = alpha;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prior::log_posterior;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn c4() -> ContiguityGraph {
        ContiguityGraph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn two_nodes() {
        let g = ContiguityGraph::from_edge_list(2, &[(0, 1)]).unwrap();
        let x = array![[0.0], [1.0]];
        let spec = crate::models::default_hyperparams(x.view(), crate::models::Variant::GaussianDiag).unwrap();
        let h = fit(x.view(), &g, &spec).unwrap();
        assert_eq!(h.merges.len(), 1);
        assert_eq!(h.per_k.len(), 2);
        assert_eq!(h.merges[0].new_id, 2);
    }

    #[test]
    fn singleton_bound_is_delta_obs() {
        let x = array![[1.0], [1.0]];
        let spec = ModelSpec::gaussian_diag(vec![0.0], 1.0, 1.0, vec![1.0]).unwrap();
        let a = ClusterState::singleton(0, x.view(), &spec, 0).unwrap();
        let b = ClusterState::singleton(1, x.view(), &spec, 1).unwrap();
        let (score, ..) = delta_bound(&a, &b, &[(0, 0)], &spec).unwrap();
        let d = crate::models::delta_lobs(&a.stats, &b.stats, &spec).unwrap();
        assert_abs_diff_eq!(score, d, epsilon = 1e-12);
        assert!(delta_bound(&a, &b, &[], &spec).is_err());
    }

    #[test]
    fn path_pairs_forming_a_cycle() {
        // {0,1} and {2,3} on C4 with two cut edges: bound adds log(4 / 2).
        let g = c4();
        let x = array![[0.0], [0.0], [0.0], [0.0]];
        let spec = ModelSpec::gaussian_diag(vec![0.0], 1.0, 1.0, vec![1.0]).unwrap();
        let mut engine = Engine::new(x.view(), &g, &spec).unwrap();
        engine.step().unwrap();
        engine.step().unwrap();
        let live = engine.live_clusters();
        assert_eq!(live.len(), 2);
        let (a, b) = (live[0], live[1]);
        let cut = engine.cut_edges(a, b);
        assert_eq!(cut.len(), 2);
        let ca = engine.cluster(a).unwrap();
        let cb = engine.cluster(b).unwrap();
        let (score, ..) = delta_bound(ca, cb, &cut, &spec).unwrap();
        let d = crate::models::delta_lobs(&ca.stats, &cb.stats, &spec).unwrap();
        assert_abs_diff_eq!(score, d + (4.0f64 / 2.0).ln(), epsilon = 1e-10);
    }

    #[test]
    fn cycle_toy_map() {
        let g = c4();
        let x = array![[0.0], [0.0], [10.0], [10.0]];
        let spec = crate::models::default_hyperparams(x.view(), crate::models::Variant::GaussianDiag).unwrap();
        let h = fit(x.view(), &g, &spec).unwrap();
        assert_eq!(h.map_k, 2);
        assert_eq!(cut_at_k(&h, 2).unwrap().clusters(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn per_k_matches_direct_evaluation() {
        let g = ContiguityGraph::grid(3, 4, crate::graph::Adjacency::Queen).unwrap();
        let x = array![[0.1], [0.3], [5.0], [5.2], [0.2], [0.0], [5.1], [4.9], [9.0], [9.3], [2.1], [8.8]];
        let spec = crate::models::default_hyperparams(x.view(), crate::models::Variant::GaussianDiag).unwrap();
        let h = fit(x.view(), &g, &spec).unwrap();
        for k in 1..=12 {
            let p = cut_at_k(&h, k).unwrap();
            assert_eq!(p.k(), k);
            let direct = log_posterior(x.view(), &g, &p, &spec, 1.0).unwrap();
            assert_abs_diff_eq!(h.per_k[k - 1].total, direct.total, epsilon = 1e-8);
        }
        let h2 = backward_pass(&h, &g, x.view(), &spec, 0.3).unwrap();
        for k in 1..=12 {
            let direct = log_posterior(x.view(), &g, &cut_at_k(&h, k).unwrap(), &spec, 0.3).unwrap();
            assert_abs_diff_eq!(h2.per_k[k - 1].total, direct.total, epsilon = 1e-8);
        }
        assert_eq!(h2, h.with_alpha(0.3).unwrap());
    }

    #[test]
    fn cut_extremes() {
        let g = c4();
        let x = array![[0.0], [1.0], [2.0], [3.0]];
        let spec = crate::models::default_hyperparams(x.view(), crate::models::Variant::GaussianDiag).unwrap();
        let h = fit(x.view(), &g, &spec).unwrap();
        assert_eq!(cut_at_k(&h, 4).unwrap(), Partition::singletons(4));
        assert_eq!(cut_at_k(&h, 1).unwrap(), Partition::whole(4));
        assert!(cut_at_k(&h, 0).is_err());
        assert!(cut_at_k(&h, 5).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let g = ContiguityGraph::from_edge_list(3, &[(0, 1)]).unwrap();
        let x = array![[0.0], [1.0], [2.0]];
        let spec = ModelSpec::gaussian_diag(vec![0.0], 1.0, 1.0, vec![1.0]).unwrap();
        assert_eq!(fit(x.view(), &g, &spec).err(), Some(Error::Disconnected));
        let g = ContiguityGraph::from_edge_list(2, &[(0, 1)]).unwrap();
        assert!(matches!(fit(x.view(), &g, &spec), Err(Error::DimensionMismatch { .. })));
    }
}
