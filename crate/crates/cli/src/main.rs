use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stclust::graph::ContiguityGraph;
use stclust::oracle::EnumerationBudget;
use stclust_cli::config::{
    AdjacencyChoice, AlrConfig, GraphSource, GridSpec, HyperValue, Hyperparameters, ModelChoice, RunConfig,
};
use stclust_cli::document::ResultDocument;
use stclust_cli::io::{self, FeatureTable};
use stclust_cli::{cluster, nmi, render, simulate, verify, CliError, Result};

#[derive(Parser)]
#[command(name = "stclust", version, about = "Bayesian contiguity-constrained hierarchical clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list, one `u v` pair per line.
    #[arg(long, conflicts_with = "grid")]
    graph: Option<PathBuf>,
    /// Node indices in --graph start at 1.
    #[arg(long, requires = "graph")]
    one_based: bool,
    /// Regular RxC grid, nodes in row-major order.
    #[arg(long)]
    grid: Option<GridSpec>,
    #[arg(long, value_enum, default_value = "rook")]
    adjacency: AdjacencyChoice,
}

impl GraphArgs {
    fn source(&self) -> Result<GraphSource> {
        match (&self.graph, self.grid) {
            (Some(path), None) => Ok(GraphSource::EdgeList {
                path: path.clone(),
                one_based: self.one_based,
            }),
            (None, Some(g)) => Ok(GraphSource::Grid {
                rows: g.rows,
                cols: g.cols,
                adjacency: self.adjacency,
            }),
            _ => Err(CliError::Validation("exactly one of --graph or --grid is required".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a feature table over a contiguity graph.
    Cluster {
        #[arg(long)]
        features: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "gaussian-diag")]
        model: ModelChoice,
        #[arg(long, default_value = "auto")]
        tau: HyperValue,
        #[arg(long, default_value = "auto")]
        kappa: HyperValue,
        #[arg(long, default_value = "auto")]
        beta: HyperValue,
        #[arg(long, default_value = "auto")]
        mu: HyperValue,
        /// Cluster-count prior parameter in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Reference column for the additive log-ratio transform.
        #[arg(long)]
        alr_ref: Option<String>,
        #[arg(long, default_value_t = 1e-6, requires = "alr_ref")]
        alr_floor: f64,
        /// Also emit the assignment with this many clusters.
        #[arg(long)]
        cut_at: Vec<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate the nine-block grid image.
    Simulate {
        #[arg(long, default_value_t = 30)]
        rows: usize,
        #[arg(long, default_value_t = 30)]
        cols: usize,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Feature table; ground truth goes next to it as `.truth.csv`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalised mutual information between two label files.
    EvalNmi { a: PathBuf, b: PathBuf },
    /// Brute-force cross-checks on a small graph.
    Verify {
        #[arg(long, conflicts_with_all = ["grid", "random"])]
        graph: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        one_based: bool,
        #[arg(long, conflicts_with = "random")]
        grid: Option<GridSpec>,
        #[arg(long, value_enum, default_value = "rook")]
        adjacency: AdjacencyChoice,
        /// Random connected graph with this many nodes.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
    },
    /// Draw the dendrogram of a result document as SVG.
    RenderDendrogram {
        document: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cluster {
            features,
            graph,
            model,
            tau,
            kappa,
            beta,
            mu,
            alpha,
            alr_ref,
            alr_floor,
            cut_at,
            seed,
            out,
        } => {
            let config = RunConfig {
                features,
                graph: graph.source()?,
                model,
                hyperparameters: Hyperparameters { tau, kappa, beta, mu },
                alpha,
                alr: alr_ref.map(|reference| AlrConfig {
                    reference,
                    floor: alr_floor,
                }),
                cut_at,
                out,
                seed,
            };
            let doc = cluster::cmd_cluster(&config)?;
            println!("map_k = {}", doc.map_k);
        }
        Command::Simulate {
            rows,
            cols,
            sigma,
            seed,
            out,
        } => {
            let sim = simulate::simulate(rows, cols, sigma, seed)?;
            io::write_features(
                &out,
                &FeatureTable {
                    names: vec!["value".into()],
                    values: sim.features,
                },
            )?;
            io::write_labels(&out.with_extension("truth.csv"), &sim.truth)?;
        }
        Command::EvalNmi { a, b } => {
            println!("{}", nmi::nmi(&io::read_labels(&a)?, &io::read_labels(&b)?)?);
        }
        Command::Verify {
            graph,
            one_based,
            grid,
            adjacency,
            random,
            seed,
            max_nodes,
        } => {
            let g = match (graph, grid, random) {
                (Some(path), None, None) => ContiguityGraph::parse_edge_list(&io::read_text(&path)?, None, one_based)?,
                (None, Some(gs), None) => ContiguityGraph::grid(gs.rows, gs.cols, adjacency.into())?,
                (None, None, Some(n)) => verify::random_graph(n, 0.4, seed)?,
                _ => return Err(CliError::Validation("give one of --graph, --grid or --random".into())),
            };
            let budget = EnumerationBudget {
                max_nodes,
                ..EnumerationBudget::default()
            };
            let report = verify::verify(&g, &budget)?;
            print!("{report}");
            if !report.passed() {
                return Err(CliError::Numeric("verification failed".into()));
            }
        }
        Command::RenderDendrogram { document, out } => {
            let doc = ResultDocument::from_json(&io::read_text(&document)?)?;
            io::write_text(&out, &render::render_svg(&doc.dendrogram)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
