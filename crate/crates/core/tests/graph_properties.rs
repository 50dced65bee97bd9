mod common;

use common::*;
use rand::Rng;
use stclust::graph::{MultiGraph, Partition, Topology};

#[test]
fn contraction_removes_one_node_and_the_contracted_multiplicity() {
    let mut rng = rng(21);
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let g = random_connected_multigraph(&mut rng, n, 0.4, 3);
        for (u, v, m) in g.weighted_edges() {
            let c = g.contract_edge(u, v).unwrap();
            assert_eq!(c.node_count(), n - 1);
            assert_eq!(c.total_multiplicity(), g.total_multiplicity() - m);
        }
    }
}

#[test]
fn singleton_quotient_is_the_graph() {
    let mut rng = rng(22);
    for _ in 0..30 {
        let n = rng.random_range(1..=10);
        let g = random_connected_graph(&mut rng, n, 0.3);
        let q = g.quotient_multigraph(&Partition::singletons(n)).unwrap();
        assert_eq!(q, MultiGraph::from(&g));
    }
}

#[test]
fn quotient_multiplicity_counts_crossing_edges() {
    let mut rng = rng(23);
    for _ in 0..100 {
        let n = rng.random_range(1..=10);
        let g = random_connected_graph(&mut rng, n, 0.4);
        let k = rng.random_range(1..=n);
        let p = random_compatible_partition(&mut rng, &g, k);
        let intra = g
            .edges()
            .iter()
            .filter(|&&(u, v)| p.cluster_of(u) == p.cluster_of(v))
            .count();
        let q = g.quotient_multigraph(&p).unwrap();
        assert_eq!(q.node_count(), k);
        assert_eq!(q.total_multiplicity() as usize, g.edge_count() - intra);
    }
}

#[test]
fn contracting_a_quotient_equals_quotient_of_the_coarser_partition() {
    let mut rng = rng(24);
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let g = random_connected_graph(&mut rng, n, 0.4);
        let k = rng.random_range(2..=n);
        let p = random_compatible_partition(&mut rng, &g, k);
        let q = g.quotient_multigraph(&p).unwrap();
        let (a, b, _) = q.weighted_edges()[rng.random_range(0..q.pair_count())];
        let contracted = q.contract_edge(a, b).unwrap();

        // Same coarsening applied to the partition: clusters a and b fuse
        // into the smaller label, higher labels shift down.
        let labels: Vec<usize> = p
            .assignment()
            .iter()
            .map(|&c| {
                let c = if c == b { a } else { c };
                if c > b {
                    c - 1
                } else {
                    c
                }
            })
            .collect();
        let coarse = Partition::from_labels(&labels);
        assert_eq!(contracted, g.quotient_multigraph(&coarse).unwrap());

        // The merged cluster's induced subgraph is connected and its internal
        // edge count equals the multiplicity that disappeared.
        let merged: Vec<usize> = (0..n).filter(|&v| labels[v] == a.min(b)).collect();
        let sub = g.induced_subgraph(&merged).unwrap();
        assert!(sub.is_connected());
        let before: usize = p
            .clusters()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i == a || *i == b)
            .map(|(_, m)| g.induced_subgraph(m).unwrap().edge_count())
            .sum();
        assert_eq!(sub.edge_count() - before, q.multiplicity(a, b) as usize);
    }
}
