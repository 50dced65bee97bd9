#![allow(dead_code)]

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stclust::graph::{ContiguityGraph, MultiGraph, Partition, Topology};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spanning tree by random attachment, plus each remaining pair with
/// probability `p`.
pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        pairs.push((perm[i].min(perm[j]), perm[i].max(perm[j])));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.contains(&(u, v)) && rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ContiguityGraph {
    let pairs = random_pairs(rng, n, p);
    ContiguityGraph::from_edge_list(n, &pairs).unwrap()
}

pub fn random_connected_multigraph(rng: &mut ChaCha8Rng, n: usize, p: f64, max_mult: u64) -> MultiGraph {
    let edges: Vec<(usize, usize, u64)> = random_pairs(rng, n, p)
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(1..=max_mult)))
        .collect();
    MultiGraph::from_weighted_edges(n, &edges).unwrap()
}

/// Partition into `k` connected clusters grown from random seeds.
pub fn random_compatible_partition(rng: &mut ChaCha8Rng, g: &ContiguityGraph, k: usize) -> Partition {
    let n = g.node_count();
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    let mut label = vec![usize::MAX; n];
    for (c, &s) in nodes[..k].iter().enumerate() {
        label[s] = c;
    }
    loop {
        let frontier: Vec<(usize, usize)> = (0..n)
            .filter(|&v| label[v] == usize::MAX)
            .flat_map(|v| {
                g.adjacent(v)
                    .iter()
                    .filter(|&&u| label[u] != usize::MAX)
                    .map(move |&u| (v, u))
                    .collect::<Vec<_>>()
            })
            .collect();
        if frontier.is_empty() {
            break;
        }
        let (v, u) = frontier[rng.random_range(0..frontier.len())];
        label[v] = label[u];
    }
    Partition::from_labels(&label)
}

/// 1-d data drawn around a few well-separated levels plus noise.
pub fn random_data(rng: &mut ChaCha8Rng, n: usize, levels: usize, noise: f64) -> Array2<f64> {
    let centres: Vec<f64> = (0..levels).map(|i| 4.0 * i as f64).collect();
    Array2::from_shape_fn((n, 1), |_| centres[rng.random_range(0..levels)] + noise * (rng.random::<f64>() - 0.5))
}

/// Data piecewise constant over a random compatible partition, plus noise.
pub fn planted_data(rng: &mut ChaCha8Rng, g: &ContiguityGraph, k: usize, noise: f64) -> (Array2<f64>, Partition) {
    let p = random_compatible_partition(rng, g, k);
    let levels: Vec<f64> = (0..k).map(|i| 3.0 * i as f64).collect();
    let x = Array2::from_shape_fn((g.node_count(), 1), |(v, _)| {
        levels[p.cluster_of(v)] + noise * (rng.random::<f64>() - 0.5)
    });
    (x, p)
}
