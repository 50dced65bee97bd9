use std::fs;
use std::path::Path;
use std::process::Command;

use stclust::graph::{ContiguityGraph, Partition};
use stclust::oracle::{exhaustive_map, EnumerationBudget};
use stclust_cli::cluster::{assignments_path, cmd_cluster, run};
use stclust_cli::config::{AdjacencyChoice, GraphSource, Hyperparameters, ModelChoice, RunConfig};
use stclust_cli::config::resolve_spec;
use stclust_cli::document::{without_timing, ResultDocument};
use stclust_cli::io::{read_features, read_labels};

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn config(features: &Path, graph: GraphSource, out: &Path) -> RunConfig {
    RunConfig {
        features: features.to_path_buf(),
        graph,
        model: ModelChoice::GaussianDiag,
        hyperparameters: Hyperparameters::default(),
        alpha: 1.0,
        alr: None,
        cut_at: vec![],
        out: out.to_path_buf(),
        seed: None,
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stclust"))
}

#[test]
fn two_node_run() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "v\n0.0\n3.0\n");
    let g = write(dir.path(), "g.txt", "0 1\n");
    let doc = run(&config(&f, GraphSource::EdgeList { path: g, one_based: false }, &dir.path().join("o.json"))).unwrap();
    assert_eq!(doc.per_k.len(), 2);
    assert_eq!(doc.merges.len(), 1);
}

#[test]
fn cycle_matches_exhaustive_map() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "v\n0.0\n0.1\n5.0\n5.1\n");
    let g = write(dir.path(), "g.txt", "0 1\n1 2\n2 3\n3 0\n");
    let out = dir.path().join("o.json");
    let doc = cmd_cluster(&config(&f, GraphSource::EdgeList { path: g.clone(), one_based: false }, &out)).unwrap();
    assert_eq!(doc.map_k, 2);
    assert_eq!(doc.assignments[0].labels, vec![0, 0, 1, 1]);

    let x = read_features(&f).unwrap().values;
    let graph = ContiguityGraph::parse_edge_list(&fs::read_to_string(&g).unwrap(), Some(4), false).unwrap();
    let spec = resolve_spec(x.view(), ModelChoice::GaussianDiag, &Hyperparameters::default()).unwrap();
    let oracle = exhaustive_map(x.view(), &graph, &spec, 1.0, &EnumerationBudget::default()).unwrap();
    assert_eq!(oracle.partition.canonical(), Partition::from_labels(&[0, 0, 1, 1]));
    assert!((oracle.value.total - doc.per_k[1].total).abs() < 1e-9);
    assert_eq!(read_labels(&assignments_path(&out)).unwrap(), vec![0, 0, 1, 1]);
}

#[test]
fn document_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let sim = stclust_cli::simulate::simulate(9, 9, 0.4, 3).unwrap();
    let mut text = String::from("value\n");
    for v in sim.features.column(0) {
        text.push_str(&format!("{v}\n"));
    }
    let f = write(dir.path(), "x.csv", &text);
    let grid = GraphSource::Grid {
        rows: 9,
        cols: 9,
        adjacency: AdjacencyChoice::Rook,
    };
    let mut cfg = config(&f, grid, &dir.path().join("a.json"));
    cfg.cut_at = vec![3, 1, 3];
    let doc = cmd_cluster(&cfg).unwrap();
    let read = ResultDocument::from_json(&fs::read_to_string(&cfg.out).unwrap()).unwrap();
    assert_eq!(read, doc);
    assert_eq!(read.assignments.iter().map(|a| a.k).collect::<Vec<_>>()[1..], [1, 3]);
    for a in &read.assignments {
        assert_eq!(read.replay(a.k).unwrap().assignment(), &a.labels[..]);
    }

    let first = fs::read_to_string(&cfg.out).unwrap();
    cmd_cluster(&cfg).unwrap();
    let second = fs::read_to_string(&cfg.out).unwrap();
    assert_eq!(without_timing(&first).unwrap(), without_timing(&second).unwrap());
    assert!(!without_timing(&first).unwrap().contains("runtime_seconds"));
    assert!(first.contains("\"format_version\": 1"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "x.csv", "v\n0\n1\n2\n3\n");
    let split = write(dir.path(), "g.txt", "0 1\n2 3\n");
    let out = dir.path().join("o.json");
    let status = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();

    let missing = dir.path().join("nope.csv");
    assert_eq!(
        status(&["cluster", "--features", missing.to_str().unwrap(), "--grid", "2x2", "--out", out.to_str().unwrap()]),
        2
    );
    assert_eq!(
        status(&[
            "cluster",
            "--features",
            f.to_str().unwrap(),
            "--graph",
            split.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        3
    );
    assert_eq!(
        status(&["cluster", "--features", f.to_str().unwrap(), "--grid", "2x2", "--alpha", "0", "--out", out.to_str().unwrap()]),
        3
    );
    assert_eq!(
        status(&["cluster", "--features", f.to_str().unwrap(), "--grid", "3x3", "--out", out.to_str().unwrap()]),
        3
    );
    assert_eq!(
        status(&["cluster", "--features", f.to_str().unwrap(), "--grid", "2x2", "--queen-typo"]),
        2
    );
    assert_eq!(
        status(&["cluster", "--features", f.to_str().unwrap(), "--grid", "2x2", "--out", out.to_str().unwrap()]),
        0
    );
    let svg = dir.path().join("d.svg");
    assert_eq!(status(&["render-dendrogram", out.to_str().unwrap(), "--out", svg.to_str().unwrap()]), 0);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn simulate_and_score() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let o = bin()
        .args(["simulate", "--sigma", "0.5", "--seed", "4", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success());
    let x = read_features(&out).unwrap();
    assert_eq!(x.values.dim(), (900, 1));
    let truth = out.with_extension("truth.csv");
    assert_eq!(read_labels(&truth).unwrap().len(), 900);
    let o = bin()
        .args(["eval-nmi", truth.to_str().unwrap(), truth.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "1");
}

#[test]
fn verify_command() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4.txt", "0 1\n1 2\n2 3\n3 0\n");
    let o = bin().args(["verify", "--graph", c4.to_str().unwrap()]).output().unwrap();
    assert!(o.status.success());
    let report = String::from_utf8(o.stdout).unwrap();
    assert_eq!(report.matches("PASS").count(), 5);

    let o = bin().args(["verify", "--random", "6", "--seed", "5"]).output().unwrap();
    assert!(o.status.success());

    let split = write(dir.path(), "split.txt", "0 1\n2 3\n");
    let o = bin().args(["verify", "--graph", split.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("disconnected"));
}
