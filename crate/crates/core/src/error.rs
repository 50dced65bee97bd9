use thiserror::Error;

/// Errors produced by the clustering library.
///
/// Constraint violations (an infeasible partition, a disconnected graph) are
/// kept distinct from numerical failures so callers can tell them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node index {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("grid dimensions must be positive (got {rows}x{cols})")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("node sets overlap at node {node}")]
    OverlappingSets { node: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("no edge between nodes {g} and {h}")]
    EdgeAbsent { g: usize, h: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("infeasible partition: cluster {cluster} does not induce a connected subgraph")]
    InfeasiblePartition { cluster: usize },

    #[error("factor lost positive definiteness at pivot {pivot} (value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("count models require non-negative integer features (got {value})")]
    InvalidCount { value: f64 },

    #[error("sufficient statistics come from different model variants")]
    ModelMismatch,

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("enumeration budget exceeded: {what} exceeds {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
