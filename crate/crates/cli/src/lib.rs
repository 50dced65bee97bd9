//! Command-line plumbing around the `stclust` library.

pub mod cluster;
pub mod config;
pub mod document;
pub mod error;
pub mod io;
pub mod nmi;
pub mod render;
pub mod simulate;
pub mod verify;

pub use error::{CliError, Result};
