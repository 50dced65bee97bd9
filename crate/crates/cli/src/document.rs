//! The serialised result of a clustering run.

use serde::{Deserialize, Serialize};
use stclust::agglomerative::Hierarchy;
use stclust::dendrogram::Dendrogram;
use stclust::graph::Partition;
use stclust::models::ModelSpec;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ResolvedModel {
    GaussianDiag {
        mu0: Vec<f64>,
        tau: f64,
        kappa: f64,
        beta: Vec<f64>,
    },
    Poisson {
        shape: Vec<f64>,
        rate: Vec<f64>,
    },
    Multinomial {
        concentration: Vec<f64>,
    },
}

impl From<&ModelSpec> for ResolvedModel {
    fn from(spec: &ModelSpec) -> Self {
        match spec.clone() {
            ModelSpec::GaussianDiag {
                mu0,
                tau,
                kappa,
                beta,
            } => ResolvedModel::GaussianDiag { mu0, tau, kappa, beta },
            ModelSpec::PoissonGamma { shape, rate } => ResolvedModel::Poisson { shape, rate },
            ModelSpec::MultinomialDirichlet { concentration } => ResolvedModel::Multinomial { concentration },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: RunConfig,
    pub model: ResolvedModel,
    pub feature_names: Vec<String>,
    pub n: usize,
    pub edges: usize,
    /// Wall-clock time of the run; the only field allowed to differ between
    /// identical runs.
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub step: usize,
    pub g: usize,
    pub h: usize,
    pub new_id: usize,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerKRecord {
    pub k: usize,
    pub log_obs: f64,
    pub log_prior: f64,
    pub log_k_prior: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafRecord {
    pub cluster: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub height: f64,
    pub merges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontRecord {
    pub k: usize,
    pub alpha_low: f64,
    pub alpha_high: f64,
    pub log_posterior_intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DendrogramRecord {
    pub leaves: Vec<LeafRecord>,
    /// Merges inside the leaves, all at height 0.
    pub base: LevelRecord,
    pub levels: Vec<LevelRecord>,
    pub front: Vec<FrontRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub k: usize,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub format_version: u32,
    pub metadata: Metadata,
    pub merges: Vec<MergeRecord>,
    pub per_k: Vec<PerKRecord>,
    pub map_k: usize,
    pub dendrogram: DendrogramRecord,
    pub assignments: Vec<AssignmentRecord>,
}

fn level_record(height: f64, merges: &[stclust::agglomerative::Merge]) -> LevelRecord {
    LevelRecord {
        height,
        merges: merges.iter().map(|m| (m.g, m.h)).collect(),
    }
}

pub fn dendrogram_record(d: &Dendrogram) -> DendrogramRecord {
    DendrogramRecord {
        leaves: d
            .leaves
            .iter()
            .map(|l| LeafRecord {
                cluster: l.cluster,
                members: l.members.clone(),
            })
            .collect(),
        base: level_record(d.base.height, &d.base.merges),
        levels: d.levels.iter().map(|l| level_record(l.height, &l.merges)).collect(),
        front: d
            .front
            .segments
            .iter()
            .map(|s| FrontRecord {
                k: s.k,
                alpha_low: s.alpha_low,
                alpha_high: s.alpha_high,
                log_posterior_intercept: s.intercept,
            })
            .collect(),
    }
}

pub fn merge_records(h: &Hierarchy) -> Vec<MergeRecord> {
    h.merges
        .iter()
        .map(|m| MergeRecord {
            step: m.step,
            g: m.g,
            h: m.h,
            new_id: m.new_id,
            score: m.bound_score,
        })
        .collect()
}

pub fn per_k_records(h: &Hierarchy) -> Vec<PerKRecord> {
    h.per_k
        .iter()
        .enumerate()
        .map(|(i, pv)| PerKRecord {
            k: i + 1,
            log_obs: pv.log_obs,
            log_prior: pv.log_partition_prior,
            log_k_prior: pv.log_k_prior,
            total: pv.total,
        })
        .collect()
}

impl ResultDocument {
    /// Partition with `k` clusters obtained by replaying the stored merges,
    /// clusters labelled by their smallest member.
    pub fn replay(&self, k: usize) -> Result<Partition> {
        let n = self.metadata.n;
        if k == 0 || k > n || self.merges.len() + 1 != n {
            return Err(CliError::Validation(format!("cannot cut a {n}-node hierarchy at K={k}")));
        }
        let mut members: Vec<Option<Vec<usize>>> = (0..n).map(|v| Some(vec![v])).collect();
        for m in &self.merges[..n - k] {
            let take = |members: &mut Vec<Option<Vec<usize>>>, id: usize| {
                members
                    .get_mut(id)
                    .and_then(Option::take)
                    .ok_or_else(|| CliError::Validation(format!("merge {} uses dead cluster {id}", m.step)))
            };
            let mut union = take(&mut members, m.g)?;
            union.extend(take(&mut members, m.h)?);
            if m.new_id != members.len() {
                return Err(CliError::Validation(format!("merge {} has unexpected id {}", m.step, m.new_id)));
            }
            members.push(Some(union));
        }
        let clusters = members.into_iter().flatten().collect();
        Ok(Partition::from_clusters(n, clusters)?.canonical())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ResultDocument =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("result document: {e}")))?;
        if doc.format_version != FORMAT_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        Ok(doc)
    }
}

/// Document text with the timing field removed, for determinism checks.
pub fn without_timing(text: &str) -> Result<String> {
    let mut v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("result document: {e}")))?;
    if let Some(meta) = v.get_mut("metadata").and_then(|m| m.as_object_mut()) {
        meta.remove("runtime_seconds");
    }
    Ok(serde_json::to_string_pretty(&v).expect("value serialises"))
}
