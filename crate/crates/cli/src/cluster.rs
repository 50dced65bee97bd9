//! End-to-end clustering run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use stclust::agglomerative::fit;
use stclust::dendrogram::{build_dendrogram, front_lines, pareto_front};
use stclust::graph::{ContiguityGraph, Topology};

use crate::config::{resolve_spec, GraphSource, RunConfig};
use crate::document::{
    dendrogram_record, merge_records, per_k_records, AssignmentRecord, Metadata, ResultDocument, FORMAT_VERSION,
};
use crate::error::{CliError, Result};
use crate::io;

pub fn load_graph(source: &GraphSource, n: usize) -> Result<ContiguityGraph> {
    let g = match source {
        GraphSource::EdgeList { path, one_based } => {
            ContiguityGraph::parse_edge_list(&io::read_text(path)?, Some(n), *one_based)?
        }
        GraphSource::Grid { rows, cols, adjacency } => ContiguityGraph::grid(*rows, *cols, (*adjacency).into())?,
    };
    if g.node_count() != n {
        return Err(CliError::Validation(format!(
            "feature file has {n} rows but the graph has {} nodes",
            g.node_count()
        )));
    }
    if !g.is_connected() {
        return Err(CliError::Validation("contiguity graph is disconnected".into()));
    }
    Ok(g)
}

/// Runs the clustering described by `config` and returns the document
/// without writing it.
pub fn run(config: &RunConfig) -> Result<ResultDocument> {
    config.validate()?;
    let start = Instant::now();
    let mut table = io::read_features(&config.features)?;
    if let Some(alr) = &config.alr {
        table = io::additive_log_ratio(&table, &alr.reference, alr.floor)?;
    }
    let n = table.values.nrows();
    let g = load_graph(&config.graph, n)?;
    if let Some(&k) = config.cut_at.iter().find(|&&k| k > n) {
        return Err(CliError::Validation(format!("--cut-at {k} exceeds the {n} nodes")));
    }
    let spec = resolve_spec(table.values.view(), config.model, &config.hyperparameters)?;
    let x = table.values.view();

    let h = fit(x, &g, &spec)?;
    let h = if config.alpha == 1.0 { h } else { h.with_alpha(config.alpha)? };
    let front = pareto_front(&front_lines(&h))?;
    let dendrogram = build_dendrogram(&h, &front)?;

    let mut ks = vec![h.map_k];
    let mut extra = config.cut_at.clone();
    extra.sort_unstable();
    extra.dedup();
    ks.extend(extra.into_iter().filter(|&k| k != h.map_k));
    let assignments = ks
        .into_iter()
        .map(|k| {
            Ok(AssignmentRecord {
                k,
                labels: stclust::agglomerative::cut_at_k(&h, k)?.assignment().to_vec(),
            })
        })
        .collect::<Result<_>>()?;

    let runtime = start.elapsed().as_secs_f64();
    log::info!("clustered {n} nodes in {runtime:.3} s, map K = {}", h.map_k);
    Ok(ResultDocument {
        format_version: FORMAT_VERSION,
        metadata: Metadata {
            config: config.clone(),
            model: (&spec).into(),
            feature_names: table.names,
            n,
            edges: g.edge_count(),
            runtime_seconds: runtime,
        },
        merges: merge_records(&h),
        per_k: per_k_records(&h),
        map_k: h.map_k,
        dendrogram: dendrogram_record(&dendrogram),
        assignments,
    })
}

/// Path of the two-column MAP assignment file written next to `out`.
pub fn assignments_path(out: &Path) -> PathBuf {
    out.with_extension("assignments.csv")
}

pub fn cmd_cluster(config: &RunConfig) -> Result<ResultDocument> {
    let doc = run(config)?;
    io::write_text(&config.out, &doc.to_json())?;
    io::write_labels(&assignments_path(&config.out), &doc.assignments[0].labels)?;
    Ok(doc)
}
