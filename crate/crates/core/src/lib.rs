pub mod agglomerative;
pub mod dendrogram;
pub mod error;
pub mod graph;
pub mod models;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod prior;
pub mod treecount;

pub use error::{Error, Result};
