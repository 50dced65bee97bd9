//! Regularisation path over the cluster-count prior parameter and the
//! dendrogram it induces.
//!
//! Up to a term shared by every K, the log posterior of the K-cluster
//! partition is the line `I_K + (K − 1) log α` in `log α`. The partitions
//! that win for some `α ∈ (0, 1]` form the upper envelope of those lines;
//! consecutive envelope lines meet at tipping points `α*`, and the merges
//! between two surviving Ks are drawn at height `−log α*`.

use crate::agglomerative::{cut_at_k, Hierarchy, Merge};
use crate::error::{Error, Result};
use crate::graph::Partition;

/// Tolerance, in `log α`, under which two intersections coincide.
pub const COINCIDENT_TOL: f64 = 1e-12;

/// One K's line `intercept + slope · log α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontLine {
    pub k: usize,
    pub intercept: f64,
    pub slope: f64,
}

impl FrontLine {
    pub fn new(k: usize, intercept: f64) -> Self {
        Self {
            k,
            intercept,
            slope: (k - 1) as f64,
        }
    }

    pub fn at(&self, log_alpha: f64) -> f64 {
        self.intercept + self.slope * log_alpha
    }
}

/// Lines of every K of a hierarchy, without the α-only shared term.
pub fn front_lines(h: &Hierarchy) -> Vec<FrontLine> {
    h.per_k
        .iter()
        .enumerate()
        .map(|(i, pv)| FrontLine::new(i + 1, pv.intercept()))
        .collect()
}

/// A surviving K and the α interval `(alpha_low, alpha_high]` on which it
/// wins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSegment {
    pub k: usize,
    pub alpha_low: f64,
    pub alpha_high: f64,
    pub intercept: f64,
}

/// Upper envelope, ordered from the K winning at `α = 1` down to `K = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFront {
    pub segments: Vec<FrontSegment>,
}

impl ParetoFront {
    /// Surviving K selected at `alpha`; a tie at a tipping point goes to the
    /// smaller K.
    pub fn select_k(&self, alpha: f64) -> Result<usize> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::OutOfRange { what: "alpha", value: alpha });
        }
        Ok(self
            .segments
            .iter()
            .find(|s| alpha > s.alpha_low && alpha <= s.alpha_high)
            .map_or(1, |s| s.k))
    }

    /// Tipping points `log α*` between consecutive segments, root-most last.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments[..self.segments.len() - 1]
            .iter()
            .map(|s| s.alpha_low.ln())
            .collect()
    }
}

/// Upper envelope of `lines` over `log α ∈ (−∞, 0]`.
///
/// Starting from the best line at `α = 1`, each step moves to the
/// smaller-slope line that overtakes the current one first as `log α`
/// decreases. Lines meeting the envelope at a single point are dropped, and
/// coincident candidates resolve to the smaller K.
pub fn pareto_front(lines: &[FrontLine]) -> Result<ParetoFront> {
    if lines.is_empty() {
        return Err(Error::EmptyInput("no lines for the Pareto front"));
    }
    let mut sorted = lines.to_vec();
    sorted.sort_by_key(|l| l.k);
    if sorted.windows(2).any(|w| w[0].k == w[1].k) {
        return Err(Error::InvalidPartition("duplicate cluster count among front lines".into()));
    }

    let mut current = sorted[0];
    for l in &sorted[1..] {
        if l.intercept > current.intercept {
            current = *l;
        }
    }
    let mut t_high = 0.0f64;
    let mut segments = Vec::new();
    loop {
        let mut next: Option<(f64, FrontLine)> = None;
        for l in sorted.iter().filter(|l| l.slope < current.slope) {
            let t = (l.intercept - current.intercept) / (current.slope - l.slope);
            let better = match next {
                None => true,
                Some((bt, _)) => t > bt + COINCIDENT_TOL * bt.abs().max(1.0),
            };
            let tie = matches!(next, Some((bt, _)) if (t - bt).abs() <= COINCIDENT_TOL * bt.abs().max(1.0));
            if better || (tie && l.k < next.unwrap().1.k) {
                next = Some((t, *l));
            }
        }
        match next {
            None => {
                segments.push(FrontSegment {
                    k: current.k,
                    alpha_low: 0.0,
                    alpha_high: t_high.exp(),
                    intercept: current.intercept,
                });
                break;
            }
            Some((t, l)) => {
                let t = t.min(t_high);
                if t >= t_high - COINCIDENT_TOL * t_high.abs().max(1.0) {
                    // `current` only touches the envelope at t_high.
                    current = l;
                    continue;
                }
                segments.push(FrontSegment {
                    k: current.k,
                    alpha_low: t.exp(),
                    alpha_high: t_high.exp(),
                    intercept: current.intercept,
                });
                t_high = t;
                current = l;
            }
        }
    }
    Ok(ParetoFront { segments })
}

/// A base cluster at the bottom of the dendrogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub cluster: usize,
    pub members: Vec<usize>,
}

/// Merges sharing one tipping point.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub height: f64,
    pub merges: Vec<Merge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    /// Clusters of the partition winning at `α = 1`, in drawing order.
    pub leaves: Vec<Leaf>,
    /// Merges that happen before the first surviving K, drawn at height 0
    /// inside the leaves.
    pub base: Level,
    /// Levels above the leaves, heights ascending towards the root.
    pub levels: Vec<Level>,
    pub front: ParetoFront,
}

/// Groups the merges of `h` by the tipping point at which they are accepted.
pub fn build_dendrogram(h: &Hierarchy, front: &ParetoFront) -> Result<Dendrogram> {
    if h.per_k.len() != h.n {
        return Err(Error::InvalidPartition("backward pass has not been run".into()));
    }
    let n = h.n;
    let head = front.segments[0].k;
    let step_for_k = |k: usize| n - k;

    let base = Level {
        height: 0.0,
        merges: h.merges[..step_for_k(head)].to_vec(),
    };
    let mut levels = Vec::new();
    for pair in front.segments.windows(2) {
        let (upper, lower) = (pair[0], pair[1]);
        levels.push(Level {
            height: -upper.alpha_low.ln(),
            merges: h.merges[step_for_k(upper.k)..step_for_k(lower.k)].to_vec(),
        });
    }

    let base_ids = h.clusters_at_k(head)?;
    let is_base: std::collections::BTreeSet<usize> = base_ids.iter().copied().collect();
    let mut min_member: Vec<usize> = (0..n).collect();
    for m in &h.merges {
        min_member.push(min_member[m.g].min(min_member[m.h]));
    }
    let mut leaves = Vec::with_capacity(head);
    let mut stack = vec![2 * n - 2];
    while let Some(id) = stack.pop() {
        if is_base.contains(&id) {
            let mut members = h.members_of(id);
            members.sort_unstable();
            leaves.push(Leaf { cluster: id, members });
            continue;
        }
        let (a, b) = h.children(id).expect("non-base cluster is a merge");
        let (first, second) = if min_member[a] <= min_member[b] { (a, b) } else { (b, a) };
        stack.push(second);
        stack.push(first);
    }
    Ok(Dendrogram {
        leaves,
        base,
        levels,
        front: front.clone(),
    })
}

/// The partition selected at `alpha`.
pub fn map_partition_at_alpha(h: &Hierarchy, front: &ParetoFront, alpha: f64) -> Result<Partition> {
    cut_at_k(h, front.select_k(alpha)?)
}
