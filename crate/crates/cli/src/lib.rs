//! File formats and the command-line driver for `relclust`.
//!
//! Inputs are CSV files (points or a dissimilarity matrix, plus optional
//! ground-truth labels). Outputs are the linkage table, merge events as JSON,
//! a Graphviz dendrogram, validity metrics, the minimum spanning tree and
//! per-object outlier scores.

pub mod error;
pub mod io;
pub mod output;
pub mod run;

pub use error::CliError;
pub use run::{run, InputKind, Output, RunConfig, RunSummary};
