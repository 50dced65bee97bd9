//! Spanning-tree counts through the matrix-tree theorem.
//!
//! The number of spanning trees of a (multi)graph equals the determinant of
//! its Laplacian with one row and column removed. [`LdlFactor`] holds a sparse
//! `U D Uᵀ` factorisation of that reduced Laplacian, always grounding the
//! highest-numbered node, and keeps it current under edge insertions and
//! removals with weighted rank-1 updates, so cluster merges (block-diagonal
//! plus cutset terms) and quotient-graph splits never need a full
//! refactorisation. After [`REFRESH_INTERVAL`] updates the factor is rebuilt
//! from scratch to bound round-off drift.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{ContiguityGraph, MultiGraph, Partition, Topology};

/// Rank-1 updates tolerated before a factor is rebuilt from its graph.
pub const REFRESH_INTERVAL: usize = 64;

/// Pivots at or below this fraction of their pre-update value are treated as
/// a loss of positive definiteness.
const PIVOT_TOL: f64 = 1e-10;

const GROUNDED: usize = usize::MAX;

/// Natural log of a spanning-tree count.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogTreeCount(pub f64);

impl LogTreeCount {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Sparse `U D Uᵀ` factorisation of a reduced Laplacian.
///
/// The factor owns the multigraph it was built from (in local labels
/// `0..n`). Node `n - 1` is grounded, i.e. its row and column are the ones
/// removed from the Laplacian. The remaining `n - 1` nodes are laid out in a
/// pivot order; `cols[j]` lists the strictly-lower entries of column `j` of
/// `U` as `(row position, value)` sorted by row.
#[derive(Debug, Clone)]
pub struct LdlFactor {
    graph: MultiGraph,
    order: Vec<usize>,
    pos: Vec<usize>,
    cols: Vec<Vec<(usize, f64)>>,
    d: Vec<f64>,
    log_det: f64,
    updates: usize,
}

impl LdlFactor {
    /// Order of the reduced Laplacian (`n - 1`, or 0 for a single node).
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Number of nodes of the underlying graph, grounded node included.
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// `Σ log D_ii`, the log spanning-tree count of the underlying graph.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn log_tree_count(&self) -> LogTreeCount {
        LogTreeCount(self.log_det)
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.d
    }

    /// Pivot order: position `j` holds local node `order()[j]`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    /// Rank-1 updates applied since the last fresh factorisation.
    pub fn pending_updates(&self) -> usize {
        self.updates
    }

    /// Stored nonzeros of `U` below the diagonal.
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Dense `U D Uᵀ` in pivot order. Intended for small-instance checks.
    pub fn reconstruct_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut u = vec![vec![0.0; n]; n];
        for j in 0..n {
            u[j][j] = 1.0;
            for &(i, v) in &self.cols[j] {
                u[i][j] = v;
            }
        }
        let mut out = vec![vec![0.0; n]; n];
        for r in 0..n {
            for c in 0..n {
                out[r][c] = (0..n).map(|k| u[r][k] * self.d[k] * u[c][k]).sum();
            }
        }
        out
    }

    /// Dense reduced Laplacian of the stored graph, in pivot order.
    pub fn permuted_reduced_laplacian(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = vec![vec![0.0; n]; n];
        for (u, v, m) in self.graph.weighted_edges() {
            let (pu, pv) = (self.pos[u], self.pos[v]);
            let m = m as f64;
            if pu != GROUNDED {
                out[pu][pu] += m;
            }
            if pv != GROUNDED {
                out[pv][pv] += m;
            }
            if pu != GROUNDED && pv != GROUNDED {
                out[pu][pv] -= m;
                out[pv][pu] -= m;
            }
        }
        out
    }

    /// Adds `m` parallel copies of each listed edge (local labels).
    pub fn add_edges(&mut self, edges: &[(usize, usize, u64)]) -> Result<()> {
        for &(u, v, m) in edges {
            self.check_pair(u, v)?;
            if m == 0 {
                continue;
            }
            self.graph.add_edge(u, v, m);
            self.rank_one(u, v, m as f64)?;
        }
        self.finish_updates()
    }

    /// Removes `m` parallel copies of each listed edge (local labels). Fails
    /// without modifying `self` if an edge is missing or the graph would
    /// become disconnected.
    pub fn remove_edges(&mut self, edges: &[(usize, usize, u64)]) -> Result<()> {
        let mut work = self.clone();
        for &(u, v, m) in edges {
            work.check_pair(u, v)?;
            if !work.graph.remove_edge(u, v, m) {
                return Err(Error::EdgeAbsent { g: u, h: v });
            }
            work.rank_one(u, v, -(m as f64))?;
        }
        work.finish_updates()?;
        *self = work;
        Ok(())
    }

    /// Appends an isolated node and returns its local label.
    ///
    /// The new node takes label `n - 1` and the grounded node moves to `n`,
    /// so the grounded node stays the highest-numbered one. The factor has a
    /// zero pivot until the new node is connected with [`add_edges`].
    ///
    /// [`add_edges`]: LdlFactor::add_edges
    pub fn insert_node(&mut self) -> usize {
        let old_ground = self.graph.node_count() - 1;
        let fresh = self.graph.push_node();
        self.graph.swap_labels(old_ground, fresh);
        self.pos.push(GROUNDED);
        self.pos.swap(old_ground, fresh);
        self.pos[old_ground] = self.dim();
        self.order.push(old_ground);
        self.cols.push(Vec::new());
        self.d.push(0.0);
        self.log_det = f64::NEG_INFINITY;
        old_ground
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.graph.node_count();
        for node in [u, v] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { node: u });
        }
        Ok(())
    }

    fn finish_updates(&mut self) -> Result<()> {
        if self.updates > REFRESH_INTERVAL {
            let grounded = self.graph.node_count() - 1;
            *self = factorize_grounded(self.graph.clone(), grounded, None)?;
        } else {
            self.recompute_log_det();
        }
        Ok(())
    }

    fn recompute_log_det(&mut self) {
        self.log_det = self.d.iter().map(|d| d.ln()).sum();
    }

    /// `U D Uᵀ ← U D Uᵀ + sigma · l lᵀ` with `l = e_u − e_v` (grounded
    /// components dropped). Sparse form of the classical rank-one LDLᵀ
    /// modification: only columns on the fill path of `l` are touched.
    fn rank_one(&mut self, u: usize, v: usize, sigma: f64) -> Result<()> {
        self.updates += 1;
        let mut w: BTreeMap<usize, f64> = BTreeMap::new();
        if self.pos[u] != GROUNDED {
            w.insert(self.pos[u], 1.0);
        }
        if self.pos[v] != GROUNDED {
            w.insert(self.pos[v], -1.0);
        }
        let mut alpha = sigma;
        while let Some((j, p)) = w.pop_first() {
            if p == 0.0 {
                continue;
            }
            let d_old = self.d[j];
            let d_new = d_old + alpha * p * p;
            if alpha < 0.0 && d_new <= PIVOT_TOL * d_old.max(1.0) {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d_new });
            }
            let beta = p * alpha / d_new;
            alpha *= d_old / d_new;
            self.d[j] = d_new;

            // Column j pattern becomes its union with the pending entries of w.
            let old = std::mem::take(&mut self.cols[j]);
            let mut merged = Vec::with_capacity(old.len() + w.len());
            let mut col = old.into_iter().peekable();
            let pending: Vec<usize> = w.keys().copied().collect();
            let mut pend = pending.into_iter().peekable();
            loop {
                let next_col = col.peek().map(|e| e.0);
                let next_w = pend.peek().copied();
                let (row, l) = match (next_col, next_w) {
                    (None, None) => break,
                    (Some(r), Some(s)) if r == s => {
                        pend.next();
                        col.next().unwrap()
                    }
                    (Some(r), Some(s)) if s < r => (pend.next().unwrap(), 0.0),
                    (Some(_), _) => col.next().unwrap(),
                    (None, Some(_)) => (pend.next().unwrap(), 0.0),
                };
                let wr = w.entry(row).or_insert(0.0);
                *wr -= p * l;
                let updated = l + beta * *wr;
                if updated != 0.0 {
                    merged.push((row, updated));
                }
            }
            self.cols[j] = merged;
            if alpha == 0.0 {
                // the update was absorbed into a previously zero pivot
                break;
            }
        }
        Ok(())
    }

    /// Row of `U` for the grounded node if it were appended as the last
    /// pivot: solves `U D z = b` where `b` is the grounded node's Laplacian
    /// column. For a Laplacian the corresponding Schur complement is zero.
    fn grounded_extension(&self) -> Vec<(usize, f64)> {
        let grounded = self.graph.node_count() - 1;
        let mut y: BTreeMap<usize, f64> = BTreeMap::new();
        for (v, m) in self.graph.neighbors(grounded) {
            *y.entry(self.pos[v]).or_insert(0.0) -= m as f64;
        }
        let mut out = Vec::with_capacity(y.len());
        while let Some((j, yj)) = y.pop_first() {
            if yj == 0.0 {
                continue;
            }
            for &(i, l) in &self.cols[j] {
                *y.entry(i).or_insert(0.0) -= l * yj;
            }
            out.push((j, yj / self.d[j]));
        }
        out
    }
}

/// Minimum-degree elimination order of every node except `grounded`.
/// Ties go to the smallest label.
pub fn minimum_degree_order<G: Topology>(g: &G, grounded: usize) -> Vec<usize> {
    let n = g.node_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| {
            if v == grounded {
                BTreeSet::new()
            } else {
                g.neighbors(v)
                    .map(|(u, _)| u)
                    .filter(|&u| u != grounded)
                    .collect()
            }
        })
        .collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n)
        .filter(|&v| v != grounded)
        .map(|v| (adj[v].len(), v))
        .collect();
    let mut order = Vec::with_capacity(n.saturating_sub(1));
    while let Some((_, v)) = queue.pop_first() {
        order.push(v);
        let nbrs: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &a in &nbrs {
            queue.remove(&(adj[a].len(), a));
            adj[a].remove(&v);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nbrs {
            queue.insert((adj[a].len(), a));
        }
    }
    order
}

/// Factorises the reduced Laplacian of `g` (highest-numbered node grounded)
/// with a minimum-degree pivot order.
pub fn ldl_factorize<G: Topology>(g: &G) -> Result<LdlFactor> {
    let mg = to_multigraph(g);
    let n = mg.node_count();
    if n == 0 {
        return Err(Error::EmptyInput("graph has no nodes"));
    }
    factorize_grounded(mg, n - 1, None)
}

/// Factorises with an explicit pivot order (a permutation of `0..n-1`).
pub fn ldl_factorize_with_order<G: Topology>(g: &G, order: &[usize]) -> Result<LdlFactor> {
    let mg = to_multigraph(g);
    let n = mg.node_count();
    if n == 0 {
        return Err(Error::EmptyInput("graph has no nodes"));
    }
    factorize_grounded(mg, n - 1, Some(order))
}

/// `log det` of the Laplacian with row and column `removed` deleted. Any
/// choice of `removed` gives the same value for a connected graph.
pub fn log_cofactor<G: Topology>(g: &G, removed: usize) -> Result<f64> {
    let mg = to_multigraph(g);
    let n = mg.node_count();
    if removed >= n {
        return Err(Error::NodeOutOfRange { node: removed, n });
    }
    // relabel so that `removed` is the grounded (last) node
    let mut relabeled = mg;
    relabeled.swap_labels(removed, n - 1);
    Ok(factorize_grounded(relabeled, n - 1, None)?.log_det())
}

/// Log number of spanning trees, parallel edges counted as distinct.
pub fn log_tree_count<G: Topology>(g: &G) -> Result<LogTreeCount> {
    Ok(ldl_factorize(g)?.log_tree_count())
}

/// Factor of the union of two node sets, from the factors of each side and
/// the edges crossing between them.
///
/// The union is labelled `a`'s nodes first (`0..na`), then `b`'s
/// (`na..na+nb`), so `b`'s grounded node stays grounded. `cut_edges` are
/// `(node in a, node in b)` pairs in each factor's own labels; repeated pairs
/// are parallel edges. The result is the block-diagonal Laplacian plus one
/// rank-1 term per cut edge.
pub fn merge_factors(fa: &LdlFactor, fb: &LdlFactor, cut_edges: &[(usize, usize)]) -> Result<LdlFactor> {
    if cut_edges.is_empty() {
        return Err(Error::Disconnected);
    }
    let (na, nb) = (fa.node_count(), fb.node_count());
    let mut grouped: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for &(u, v) in cut_edges {
        if u >= na {
            return Err(Error::NodeOutOfRange { node: u, n: na });
        }
        if v >= nb {
            return Err(Error::NodeOutOfRange { node: v, n: nb });
        }
        *grouped.entry((u, v + na)).or_insert(0) += 1;
    }

    let mut graph = MultiGraph::empty(na + nb);
    for (u, v, m) in fa.graph.weighted_edges() {
        graph.add_edge(u, v, m);
    }
    for (u, v, m) in fb.graph.weighted_edges() {
        graph.add_edge(u + na, v + na, m);
    }

    if fa.updates + fb.updates + grouped.len() > REFRESH_INTERVAL {
        for (&(u, v), &m) in &grouped {
            graph.add_edge(u, v, m);
        }
        return factorize_grounded(graph, na + nb - 1, None);
    }

    // a's block, then a's grounded node as a zero pivot, then b's block.
    let da = fa.dim();
    let shift = da + 1;
    let mut cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(da + 1 + fb.dim());
    cols.extend(fa.cols.iter().cloned());
    for (j, z) in fa.grounded_extension() {
        cols[j].push((da, z));
    }
    cols.push(Vec::new());
    cols.extend(
        fb.cols
            .iter()
            .map(|c| c.iter().map(|&(i, v)| (i + shift, v)).collect()),
    );
    let mut d = Vec::with_capacity(cols.len());
    d.extend_from_slice(&fa.d);
    d.push(0.0);
    d.extend_from_slice(&fb.d);
    let mut order: Vec<usize> = fa.order.clone();
    order.push(na - 1);
    order.extend(fb.order.iter().map(|&v| v + na));
    let mut pos = vec![GROUNDED; na + nb];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }

    let mut out = LdlFactor {
        graph,
        order,
        pos,
        cols,
        d,
        log_det: 0.0,
        updates: fa.updates + fb.updates,
    };
    let edges: Vec<(usize, usize, u64)> = grouped.into_iter().map(|((u, v), m)| (u, v, m)).collect();
    for &(u, v, m) in &edges {
        out.graph.add_edge(u, v, m);
        out.rank_one(u, v, m as f64)?;
    }
    if out.d.iter().any(|&x| x <= 0.0) {
        return Err(Error::Numeric("merged factor kept a zero pivot".into()));
    }
    out.finish_updates()?;
    Ok(out)
}

/// The factor with the listed edges' rank-1 terms removed.
pub fn downdate_factor(f: &LdlFactor, removed_edges: &[(usize, usize)]) -> Result<LdlFactor> {
    let mut grouped: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for &(u, v) in removed_edges {
        *grouped.entry((u.min(v), u.max(v))).or_insert(0) += 1;
    }
    let edges: Vec<(usize, usize, u64)> = grouped.into_iter().map(|((u, v), m)| (u, v, m)).collect();
    let mut out = f.clone();
    out.remove_edges(&edges)?;
    Ok(out)
}

/// Log number of spanning trees of `g` compatible with `p`: each cluster
/// contributes its internal spanning trees and the quotient multigraph
/// contributes the ways of joining them.
pub fn log_compatible_tree_count(g: &ContiguityGraph, p: &Partition) -> Result<LogTreeCount> {
    let mut total = 0.0;
    for (k, members) in p.clusters().iter().enumerate() {
        let sub = g.induced_subgraph(members)?;
        if !sub.is_connected() {
            return Err(Error::InfeasiblePartition { cluster: k });
        }
        total += log_tree_count(&sub)?.0;
    }
    let quotient = g.quotient_multigraph(p)?;
    if !quotient.is_connected() {
        return Err(Error::Disconnected);
    }
    total += log_tree_count(&quotient)?.0;
    Ok(LogTreeCount(total))
}

fn to_multigraph<G: Topology>(g: &G) -> MultiGraph {
    let mut mg = MultiGraph::empty(g.node_count());
    for (u, v, m) in g.weighted_edges() {
        mg.add_edge(u, v, m);
    }
    mg
}

fn factorize_grounded(graph: MultiGraph, grounded: usize, order: Option<&[usize]>) -> Result<LdlFactor> {
    let n = graph.node_count();
    let order: Vec<usize> = match order {
        Some(o) => {
            let mut check: Vec<usize> = o.to_vec();
            check.sort_unstable();
            let expected: Vec<usize> = (0..n).filter(|&v| v != grounded).collect();
            if check != expected {
                return Err(Error::InvalidPartition(
                    "pivot order must list every non-grounded node once".into(),
                ));
            }
            o.to_vec()
        }
        None => minimum_degree_order(&graph, grounded),
    };
    let dim = order.len();
    let mut pos = vec![GROUNDED; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }

    let mut diag = vec![0.0; dim];
    let mut lower: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); dim];
    for (u, v, m) in graph.weighted_edges() {
        let (pu, pv) = (pos[u], pos[v]);
        let m = m as f64;
        if pu != GROUNDED {
            diag[pu] += m;
        }
        if pv != GROUNDED {
            diag[pv] += m;
        }
        if pu != GROUNDED && pv != GROUNDED {
            let (c, r) = (pu.min(pv), pu.max(pv));
            *lower[c].entry(r).or_insert(0.0) -= m;
        }
    }
    let scale: Vec<f64> = diag.clone();

    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let dj = diag[j];
        if dj <= PIVOT_TOL * scale[j].max(1.0) {
            return Err(Error::Disconnected);
        }
        let col: Vec<(usize, f64)> = std::mem::take(&mut lower[j])
            .into_iter()
            .filter(|&(_, a)| a != 0.0)
            .map(|(i, a)| (i, a / dj))
            .collect();
        for (x, &(i, li)) in col.iter().enumerate() {
            diag[i] -= li * li * dj;
            for &(k, lk) in &col[..x] {
                *lower[k].entry(i).or_insert(0.0) -= li * lk * dj;
            }
        }
        cols.push(col);
    }

    let mut f = LdlFactor {
        graph,
        order,
        pos,
        cols,
        d: diag,
        log_det: 0.0,
        updates: 0,
    };
    f.recompute_log_det();
    Ok(f)
}
