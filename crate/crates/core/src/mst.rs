//! Minimum spanning trees over the complete dissimilarity graph.
//!
//! [`mst_reliable`] reads the tree off a reliable single-linkage run: every
//! linkage record is the closest object pair between two mutually nearest
//! trees, which is always an MST edge. [`mst_kruskal`] is the classic
//! sorted-edge construction and serves as the reference.

use alloc::vec::Vec;

use crate::dataset::{pairwise_dissimilarities, Dataset, Metric};
use crate::error::{Error, Result};
use crate::linkage::Criterion;
use crate::strategy::cluster_reliable;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEdge {
    /// `i < j`.
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<WeightedEdge>,
    total_weight: f64,
}

impl SpanningTree {
    fn new(n: usize, edges: Vec<WeightedEdge>) -> Self {
        let total_weight = ascending_sum(edges.iter().map(|e| e.weight));
        SpanningTree { n, edges, total_weight }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    /// Sum of the edge weights, added in ascending order.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Edge list as sorted `(i, j)` pairs.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.i, e.j)).collect();
        pairs.sort_unstable();
        pairs
    }
}

/// Sums after sorting ascending, so equal multisets give bitwise equal totals.
pub fn ascending_sum(weights: impl IntoIterator<Item = f64>) -> f64 {
    let mut w: Vec<f64> = weights.into_iter().collect();
    w.sort_by(f64::total_cmp);
    w.into_iter().fold(0.0, |acc, x| acc + x)
}

/// Spanning tree formed by the linkage records of a reliable single-linkage
/// run, in record order.
pub fn mst_reliable(dataset: &Dataset, metric: Metric) -> Result<SpanningTree> {
    let dendrogram = cluster_reliable(dataset, Criterion::Single, metric)?;
    if !dendrogram.is_complete() {
        return Err(Error::Internal("reliable run ended with several clusters"));
    }
    let edges = dendrogram
        .records()
        .iter()
        .map(|r| WeightedEdge {
            i: r.a,
            j: r.b,
            weight: r.distance,
        })
        .collect();
    Ok(SpanningTree::new(dataset.n(), edges))
}

/// Kruskal's algorithm on all `n (n - 1) / 2` pairs, ties by `(weight, i, j)`.
pub fn mst_kruskal(dataset: &Dataset, metric: Metric) -> SpanningTree {
    let d = pairwise_dissimilarities(dataset, metric);
    let n = d.n();
    let mut all = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            all.push(WeightedEdge { i, j, weight: d.get(i, j) });
        }
    }
    all.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for e in all {
        if edges.len() + 1 >= n {
            break;
        }
        if uf.union(e.i, e.j) {
            edges.push(e);
        }
    }
    SpanningTree::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line(xs: &[f64]) -> Dataset {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    const SQ: Metric = Metric::SquaredEuclidean;

    #[test]
    fn four_points() {
        let data = line(&[0.0, 1.0, 10.0, 12.0]);
        let r = mst_reliable(&data, SQ).unwrap();
        let edges: Vec<(usize, usize, f64)> = r.edges().iter().map(|e| (e.i, e.j, e.weight)).collect();
        assert_eq!(edges, vec![(0, 1, 1.0), (2, 3, 4.0), (1, 2, 81.0)]);
        assert_eq!(r.total_weight(), 86.0);
        let k = mst_kruskal(&data, SQ);
        assert_eq!(k.total_weight(), 86.0);
        assert_eq!(k.edge_set(), r.edge_set());
    }

    #[test]
    fn tie_chain() {
        // Spanning trees of the 3-point line weigh 2, 2 and 5.
        let data = line(&[0.0, 1.0, 2.0]);
        let r = mst_reliable(&data, SQ).unwrap();
        assert_eq!(r.edge_set(), vec![(0, 1), (1, 2)]);
        assert_eq!(r.total_weight(), 2.0);
        assert_eq!(mst_kruskal(&data, SQ).total_weight(), 2.0);
    }

    #[test]
    fn small_cases() {
        let two = line(&[1.0, 4.0]);
        assert_eq!(mst_reliable(&two, SQ).unwrap().total_weight(), 9.0);
        assert_eq!(mst_kruskal(&two, SQ).edges().len(), 1);
        let one = line(&[1.0]);
        assert!(mst_kruskal(&one, SQ).edges().is_empty());
        assert_eq!(mst_kruskal(&one, SQ).total_weight(), 0.0);
        assert_eq!(mst_reliable(&one, SQ).unwrap().total_weight(), 0.0);
    }

    #[test]
    fn equal_weights() {
        let n = 5;
        let mut m = vec![2.0; n * n];
        for i in 0..n {
            m[i * n + i] = 0.0;
        }
        let data = Dataset::from_dissimilarities(n, m).unwrap();
        assert_eq!(mst_kruskal(&data, SQ).total_weight(), 8.0);
        assert_eq!(mst_reliable(&data, SQ).unwrap().total_weight(), 8.0);
    }
}
