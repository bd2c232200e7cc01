//! Agglomerative hierarchical clustering with a *reliable* merge strategy.
//!
//! The standard agglomerative procedure merges the single closest pair of
//! clusters per step. The reliable strategy instead collects, at every level,
//! all pairs of clusters that are each other's nearest neighbours (the edges
//! of a mutual-nearest-neighbour graph) and merges every connected component
//! of that graph at once. An `alpha` parameter interpolates between the two.
//!
//! Both strategies work with the single, complete, average, centroid and Ward
//! criteria, emit exactly `n - 1` binary linkage records, and support cutting
//! the dendrogram into `k` flat clusters. With the single criterion, the
//! reliable strategy produces a minimum spanning tree ([`mst`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the command
//! line front end live in the companion `relclust-cli` crate.
//!
//! ```
//! use relclust::{Criterion, Dataset, Metric};
//! use relclust::strategy::cluster_reliable;
//! use relclust::eval::cut;
//!
//! let data = Dataset::from_rows(&[[0.0], [1.0], [10.0], [12.0]]).unwrap();
//! let dendrogram = cluster_reliable(&data, Criterion::Single, Metric::SquaredEuclidean).unwrap();
//! assert_eq!(dendrogram.records().len(), 3);
//! assert_eq!(cut(&dendrogram, 2).unwrap().labels(), &[0, 0, 1, 1]);
//! ```
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod dendrogram;
mod error;
pub mod eval;
pub mod linkage;
pub mod mst;
pub mod strategy;
mod union_find;

pub use dataset::{pairwise_dissimilarities, Dataset, DatasetKind, Dissimilarities, Metric, Points};
pub use dendrogram::{Cluster, Dendrogram, LinkageRecord, MergeEvent};
pub use error::{Error, Result};
pub use eval::{ContingencyTable, FlatPartition};
pub use linkage::{ClusterDistances, Criterion, Linkage};
pub use mst::{SpanningTree, WeightedEdge};
pub use strategy::{MutualNnGraph, Strategy, StrategyConfig};
