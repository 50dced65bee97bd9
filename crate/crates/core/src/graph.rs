//! Contiguity graphs, quotient multigraphs and partitions.
//!
//! Nodes are dense 0-based indices. A [`ContiguityGraph`] is a simple
//! undirected graph; a [`MultiGraph`] carries integer edge multiplicities and
//! is what cluster-level graphs (quotients, contractions) are made of.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// Read access to an undirected graph whose edges carry integer multiplicities.
///
/// Simple graphs report multiplicity 1 for every edge.
pub trait Topology {
    fn node_count(&self) -> usize;

    /// Neighbours of `v` together with the multiplicity of the connecting edge.
    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_;

    /// Every edge once, as `(u, v, multiplicity)` with `u < v`.
    fn weighted_edges(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for u in 0..self.node_count() {
            for (v, m) in self.neighbors(u) {
                if u < v {
                    out.push((u, v, m));
                }
            }
        }
        out
    }

    /// True iff the graph has a single connected component (vacuously true
    /// for zero or one node).
    fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }
}

/// Grid neighbourhood used by [`ContiguityGraph::grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    /// 4-neighbourhood.
    Rook,
    /// 8-neighbourhood.
    Queen,
}

/// Simple undirected graph over `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContiguityGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl ContiguityGraph {
    /// Builds a graph from an edge list. Duplicates and both orientations of
    /// the same pair collapse to one edge; self-loops are rejected.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges, adj })
    }

    /// Regular `rows x cols` lattice; node index is `row * cols + col`.
    pub fn grid(rows: usize, cols: usize, adjacency: Adjacency) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        let id = |r: usize, c: usize| r * cols + c;
        let mut pairs = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    pairs.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    pairs.push((id(r, c), id(r + 1, c)));
                }
                if adjacency == Adjacency::Queen && r + 1 < rows {
                    if c + 1 < cols {
                        pairs.push((id(r, c), id(r + 1, c + 1)));
                    }
                    if c > 0 {
                        pairs.push((id(r, c), id(r + 1, c - 1)));
                    }
                }
            }
        }
        Self::from_edge_list(rows * cols, &pairs)
    }

    /// Parses the whitespace-separated edge-list format: one `u v` pair per
    /// line, `#` comments and blank lines ignored. When `n` is `None` the node
    /// count is one more than the largest index seen.
    pub fn parse_edge_list(text: &str, n: Option<usize>, one_based: bool) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node indices, found {}", fields.len()),
                });
            }
            let mut ends = [0usize; 2];
            for (slot, field) in ends.iter_mut().zip(&fields) {
                let raw: usize = field.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    message: format!("not a non-negative integer: {field:?}"),
                })?;
                *slot = if one_based {
                    raw.checked_sub(1).ok_or(Error::Parse {
                        line: lineno + 1,
                        message: "index 0 in a 1-based edge list".into(),
                    })?
                } else {
                    raw
                };
            }
            pairs.push((ends[0], ends[1]));
        }
        let n = n.unwrap_or_else(|| {
            pairs
                .iter()
                .map(|&(u, v)| u.max(v) + 1)
                .max()
                .unwrap_or(0)
        });
        Self::from_edge_list(n, &pairs)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacent(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Subgraph induced by `nodes`, relabelled `0..nodes.len()` in the given
    /// order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Self> {
        let local = self.local_index(nodes)?;
        let mut pairs = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &self.adj[u] {
                if let Some(j) = local[v] {
                    if i < j {
                        pairs.push((i, j));
                    }
                }
            }
        }
        Self::from_edge_list(nodes.len(), &pairs)
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    pub fn cutset_size(&self, a: &[usize], b: &[usize]) -> Result<usize> {
        Ok(self.cutset(a, b)?.len())
    }

    /// The crossing edges themselves, as `(index into a, index into b)`.
    pub fn cutset(&self, a: &[usize], b: &[usize]) -> Result<Vec<(usize, usize)>> {
        self.local_index(a)?;
        let in_b = self.local_index(b)?;
        if let Some(node) = a.iter().copied().find(|&v| in_b[v].is_some()) {
            return Err(Error::OverlappingSets { node });
        }
        let mut out = Vec::new();
        for (i, &u) in a.iter().enumerate() {
            for &v in &self.adj[u] {
                if let Some(j) = in_b[v] {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }

    /// Cluster-level multigraph: one node per cluster, multiplicity equal to
    /// the cutset size between the two clusters.
    pub fn quotient_multigraph(&self, p: &Partition) -> Result<MultiGraph> {
        if p.node_count() != self.n {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} nodes, graph has {}",
                p.node_count(),
                self.n
            )));
        }
        let mut mg = MultiGraph::empty(p.k());
        for &(u, v) in &self.edges {
            let (cu, cv) = (p.cluster_of(u), p.cluster_of(v));
            if cu != cv {
                mg.add_edge(cu, cv, 1);
            }
        }
        Ok(mg)
    }

    fn local_index(&self, nodes: &[usize]) -> Result<Vec<Option<usize>>> {
        let mut local = vec![None; self.n];
        for (i, &v) in nodes.iter().enumerate() {
            if v >= self.n {
                return Err(Error::NodeOutOfRange { node: v, n: self.n });
            }
            if local[v].replace(i).is_some() {
                return Err(Error::OverlappingSets { node: v });
            }
        }
        Ok(local)
    }
}

impl Topology for ContiguityGraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.adj[v].iter().map(|&u| (u, 1))
    }

    fn weighted_edges(&self) -> Vec<(usize, usize, u64)> {
        self.edges.iter().map(|&(u, v)| (u, v, 1)).collect()
    }
}

/// Undirected multigraph without self-loops.
///
/// Multiplicities are exact integers; a pair is absent rather than stored
/// with multiplicity zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiGraph {
    adj: Vec<BTreeMap<usize, u64>>,
}

impl MultiGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![BTreeMap::new(); n],
        }
    }

    /// Builds a multigraph from `(u, v, multiplicity)` triples; repeated pairs
    /// accumulate and zero multiplicities are ignored.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut mg = Self::empty(n);
        for &(u, v, m) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { node: u });
            }
            if m > 0 {
                mg.add_edge(u, v, m);
            }
        }
        Ok(mg)
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.adj
            .get(u)
            .and_then(|row| row.get(&v))
            .copied()
            .unwrap_or(0)
    }

    /// Sum of all multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.adj.iter().flat_map(|row| row.values()).sum::<u64>() / 2
    }

    /// Number of distinct adjacent pairs.
    pub fn pair_count(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    /// Contracts every parallel edge between `g` and `h` into one node.
    ///
    /// The merged node takes index `min(g, h)`; nodes above `max(g, h)` shift
    /// down by one. Loops created by the contraction are dropped and parallel
    /// edges to common neighbours accumulate.
    pub fn contract_edge(&self, g: usize, h: usize) -> Result<Self> {
        if self.multiplicity(g, h) == 0 {
            return Err(Error::EdgeAbsent { g, h });
        }
        let (keep, gone) = (g.min(h), g.max(h));
        let relabel = |v: usize| match v.cmp(&gone) {
            std::cmp::Ordering::Less => v,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => v - 1,
        };
        let mut out = Self::empty(self.node_count() - 1);
        for (u, v, m) in self.weighted_edges() {
            let (a, b) = (relabel(u), relabel(v));
            if a != b {
                out.add_edge(a, b, m);
            }
        }
        Ok(out)
    }

    /// The multigraph with all parallel edges between `g` and `h` removed.
    pub fn delete_pair(&self, g: usize, h: usize) -> Result<Self> {
        if self.multiplicity(g, h) == 0 {
            return Err(Error::EdgeAbsent { g, h });
        }
        let mut out = self.clone();
        out.adj[g].remove(&h);
        out.adj[h].remove(&g);
        Ok(out)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize, m: u64) {
        *self.adj[u].entry(v).or_insert(0) += m;
        *self.adj[v].entry(u).or_insert(0) += m;
    }

    /// Removes `m` parallel copies of `(u, v)`. Returns false (and leaves the
    /// graph untouched) if fewer than `m` copies exist.
    pub(crate) fn remove_edge(&mut self, u: usize, v: usize, m: u64) -> bool {
        let have = self.multiplicity(u, v);
        if have < m || m == 0 {
            return m == 0;
        }
        if have == m {
            self.adj[u].remove(&v);
            self.adj[v].remove(&u);
        } else {
            *self.adj[u].get_mut(&v).unwrap() -= m;
            *self.adj[v].get_mut(&u).unwrap() -= m;
        }
        true
    }

    pub(crate) fn push_node(&mut self) -> usize {
        self.adj.push(BTreeMap::new());
        self.adj.len() - 1
    }

    /// Exchanges the labels of nodes `a` and `b`.
    pub(crate) fn swap_labels(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let touched: std::collections::BTreeSet<usize> = self.adj[a]
            .keys()
            .chain(self.adj[b].keys())
            .copied()
            .filter(|&x| x != a && x != b)
            .collect();
        let ab = self.adj[a].get(&b).copied();
        self.adj.swap(a, b);
        for x in touched {
            let row = &mut self.adj[x];
            let ma = row.remove(&a);
            let mb = row.remove(&b);
            if let Some(m) = ma {
                row.insert(b, m);
            }
            if let Some(m) = mb {
                row.insert(a, m);
            }
        }
        if let Some(m) = ab {
            // after the row swap, a's row holds b's old row which pointed at a
            self.adj[a].remove(&a);
            self.adj[b].remove(&b);
            self.adj[a].insert(b, m);
            self.adj[b].insert(a, m);
        }
    }
}

impl Topology for MultiGraph {
    fn node_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.adj[v].iter().map(|(&u, &m)| (u, m))
    }
}

impl From<&ContiguityGraph> for MultiGraph {
    fn from(g: &ContiguityGraph) -> Self {
        let mut mg = MultiGraph::empty(g.node_count());
        for &(u, v) in g.edges() {
            mg.add_edge(u, v, 1);
        }
        mg
    }
}

/// An ordered partition of `0..n` into `k` nonempty clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl Partition {
    /// Every node in its own cluster, cluster `i` = `{i}`.
    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            clusters: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// All `n` nodes in one cluster.
    pub fn whole(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            clusters: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    /// Builds a partition from arbitrary labels; distinct label values are
    /// renumbered `0..k` in increasing label order.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut distinct: Vec<usize> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let index: BTreeMap<usize, usize> =
            distinct.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let assignment: Vec<usize> = labels.iter().map(|l| index[l]).collect();
        let mut clusters = vec![Vec::new(); distinct.len()];
        for (node, &c) in assignment.iter().enumerate() {
            clusters[c].push(node);
        }
        Self {
            assignment,
            clusters,
        }
    }

    /// Builds a partition from explicit clusters, preserving their order.
    pub fn from_clusters(n: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        for (k, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("cluster {k} is empty")));
            }
            for &v in members {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, n });
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} appears in more than one cluster"
                    )));
                }
                assignment[v] = k;
            }
        }
        if let Some(v) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} is not covered")));
        }
        let clusters = clusters
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Ok(Self {
            assignment,
            clusters,
        })
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Cluster members, each sorted ascending.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// The same partition with clusters ordered by smallest member, so that
    /// partitions equal up to relabelling compare equal.
    pub fn canonical(&self) -> Self {
        let mut clusters = self.clusters.clone();
        clusters.sort_by_key(|c| c[0]);
        Self::from_clusters(self.node_count(), clusters).expect("valid partition stays valid")
    }

    /// Index of the first cluster that does not induce a connected subgraph.
    pub fn first_disconnected_cluster(&self, g: &ContiguityGraph) -> Result<Option<usize>> {
        for (k, members) in self.clusters.iter().enumerate() {
            if !g.induced_subgraph(members)?.is_connected() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> ContiguityGraph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ContiguityGraph::from_edge_list(n, &pairs).unwrap()
    }

    fn complete(n: usize) -> ContiguityGraph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        ContiguityGraph::from_edge_list(n, &pairs).unwrap()
    }

    #[test]
    fn edge_list_dedups_orientations() {
        let g = ContiguityGraph::from_edge_list(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(cycle(4).edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn edge_list_rejects_bad_input() {
        assert_eq!(
            ContiguityGraph::from_edge_list(3, &[(0, 0)]),
            Err(Error::SelfLoop { node: 0 })
        );
        assert_eq!(
            ContiguityGraph::from_edge_list(3, &[(0, 3)]),
            Err(Error::NodeOutOfRange { node: 3, n: 3 })
        );
    }

    #[test]
    fn grid_edge_counts() {
        assert_eq!(ContiguityGraph::grid(2, 2, Adjacency::Rook).unwrap().edge_count(), 4);
        assert_eq!(ContiguityGraph::grid(2, 2, Adjacency::Queen).unwrap().edge_count(), 6);
        assert_eq!(ContiguityGraph::grid(30, 30, Adjacency::Rook).unwrap().edge_count(), 1740);
        assert!(matches!(
            ContiguityGraph::grid(0, 3, Adjacency::Rook),
            Err(Error::ZeroDimension { .. })
        ));
    }

    #[test]
    fn grid_is_row_major() {
        let g = ContiguityGraph::grid(2, 3, Adjacency::Rook).unwrap();
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(0, 3));
        assert!(!g.has_edge(2, 3));
    }

    #[test]
    fn parse_edge_list_format() {
        let text = "# cycle\n0 1\n\n1 2\n  2 3 \n3 0\n";
        let g = ContiguityGraph::parse_edge_list(text, None, false).unwrap();
        assert_eq!(g, cycle(4));
        let g1 = ContiguityGraph::parse_edge_list("1 2\n2 3\n3 4\n4 1\n", None, true).unwrap();
        assert_eq!(g1, cycle(4));
        assert!(matches!(
            ContiguityGraph::parse_edge_list("0 1\n1 x\n", None, false),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ContiguityGraph::parse_edge_list("0 1 2\n", None, false),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn induced_subgraphs_of_c4() {
        let c4 = cycle(4);
        assert_eq!(c4.induced_subgraph(&[0, 1]).unwrap().edge_count(), 1);
        let opposite = c4.induced_subgraph(&[0, 2]).unwrap();
        assert_eq!(opposite.edge_count(), 0);
        assert!(!opposite.is_connected());
        assert_eq!(c4.induced_subgraph(&[0, 1, 2, 3]).unwrap(), c4);
    }

    #[test]
    fn cutsets() {
        let c4 = cycle(4);
        assert_eq!(c4.cutset_size(&[0, 1], &[2, 3]).unwrap(), 2);
        assert_eq!(c4.cutset_size(&[0], &[2]).unwrap(), 0);
        assert_eq!(complete(4).cutset_size(&[0, 1], &[2, 3]).unwrap(), 4);
        assert_eq!(
            c4.cutset_size(&[0, 1], &[1, 2]),
            Err(Error::OverlappingSets { node: 1 })
        );
    }

    #[test]
    fn quotients() {
        let c4 = cycle(4);
        let p = Partition::from_clusters(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let q = c4.quotient_multigraph(&p).unwrap();
        assert_eq!(q.node_count(), 2);
        assert_eq!(q.multiplicity(0, 1), 2);

        let q = c4.quotient_multigraph(&Partition::singletons(4)).unwrap();
        assert_eq!(q, MultiGraph::from(&c4));

        let p = Partition::from_clusters(4, vec![vec![0], vec![1], vec![2, 3]]).unwrap();
        let q = complete(4).quotient_multigraph(&p).unwrap();
        let mut ms: Vec<u64> = q.weighted_edges().iter().map(|e| e.2).collect();
        ms.sort();
        assert_eq!(ms, vec![1, 2, 2]);
    }

    #[test]
    fn contractions() {
        let tri = MultiGraph::from(&complete(3));
        let c = tri.contract_edge(0, 1).unwrap();
        assert_eq!(c.node_count(), 2);
        assert_eq!(c.multiplicity(0, 1), 2);

        let pair = MultiGraph::from_weighted_edges(2, &[(0, 1, 3)]).unwrap();
        let single = pair.contract_edge(1, 0).unwrap();
        assert_eq!(single.node_count(), 1);
        assert_eq!(single.total_multiplicity(), 0);

        let c = MultiGraph::from(&cycle(4)).contract_edge(0, 1).unwrap();
        assert_eq!(c.node_count(), 3);
        assert_eq!(c.weighted_edges(), vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)]);

        assert_eq!(
            MultiGraph::from(&cycle(4)).contract_edge(0, 2),
            Err(Error::EdgeAbsent { g: 0, h: 2 })
        );
    }

    #[test]
    fn connectivity() {
        assert!(cycle(4).is_connected());
        assert!(!ContiguityGraph::from_edge_list(2, &[]).unwrap().is_connected());
        assert!(ContiguityGraph::from_edge_list(1, &[]).unwrap().is_connected());
        let split = MultiGraph::from_weighted_edges(4, &[(0, 1, 2), (2, 3, 1)]).unwrap();
        assert!(!split.is_connected());
    }

    #[test]
    fn swap_labels_preserves_structure() {
        let mut g = MultiGraph::from_weighted_edges(4, &[(0, 1, 2), (1, 2, 1), (2, 3, 3)]).unwrap();
        g.swap_labels(1, 3);
        assert_eq!(g.weighted_edges(), vec![(0, 3, 2), (1, 2, 3), (2, 3, 1)]);
        g.swap_labels(2, 3);
        assert_eq!(g.weighted_edges(), vec![(0, 2, 2), (1, 3, 3), (2, 3, 1)]);
    }

    #[test]
    fn partition_views_agree() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.k(), 3);
        assert_eq!(p.assignment(), &[1, 0, 1, 2]);
        assert_eq!(p.clusters(), &[vec![1], vec![0, 2], vec![3]]);
        assert!(Partition::from_clusters(3, vec![vec![0], vec![1]]).is_err());
        assert!(Partition::from_clusters(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_clusters(2, vec![vec![0, 1], vec![]]).is_err());
        let c = Partition::from_clusters(3, vec![vec![2], vec![1, 0]]).unwrap().canonical();
        assert_eq!(c.clusters(), &[vec![0, 1], vec![2]]);
    }
}
