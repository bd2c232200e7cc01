//! Dendrogram construction strategies.
//!
//! * [`cluster_standard`] merges the single closest pair of clusters per level.
//! * [`cluster_reliable`] builds the mutual-nearest-neighbour graph of the
//!   current clusters and merges each of its connected components at once.
//! * [`cluster_alpha`] keeps only the smallest `ceil(alpha * E)` of the `E`
//!   mutual-nearest-neighbour edges per level; `alpha = 1` is the reliable
//!   strategy and small `alpha` approaches the standard one.
//!
//! A component of `m` clusters contributes `m - 1` linkage records: the
//! minimum spanning tree of its mutual-nearest-neighbour edges.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dataset::{Dataset, Metric};
use crate::dendrogram::{Cluster, Dendrogram, LinkageRecord, MergeEvent};
use crate::error::{Error, Result};
use crate::linkage::{centroid, ClusterDistances, Criterion, Linkage};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Standard,
    Reliable,
    /// Fraction of the smallest mutual-nearest-neighbour links merged per
    /// level, in `(0, 1]`.
    Alpha(f64),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Standard => "standard",
            Strategy::Reliable => "reliable",
            Strategy::Alpha(_) => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub criterion: Criterion,
    pub metric: Metric,
    /// Stop after this many levels. The resulting dendrogram is incomplete
    /// and cannot be cut.
    pub max_level: Option<usize>,
}

impl StrategyConfig {
    pub fn new(strategy: Strategy, criterion: Criterion) -> Self {
        StrategyConfig {
            strategy,
            criterion,
            metric: Metric::default(),
            max_level: None,
        }
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_max_level(mut self, max_level: usize) -> Self {
        self.max_level = Some(max_level);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Strategy::Alpha(alpha) = self.strategy {
            check_alpha(alpha)?;
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Runs the configured strategy.
pub fn cluster(dataset: &Dataset, config: &StrategyConfig) -> Result<Dendrogram> {
    config.validate()?;
    match config.strategy {
        Strategy::Standard => run_standard(dataset, config),
        Strategy::Reliable | Strategy::Alpha(_) => run_reliable(dataset, config, &mut |_| {}),
    }
}

pub fn cluster_standard(dataset: &Dataset, criterion: Criterion, metric: Metric) -> Result<Dendrogram> {
    cluster(dataset, &StrategyConfig::new(Strategy::Standard, criterion).with_metric(metric))
}

pub fn cluster_reliable(dataset: &Dataset, criterion: Criterion, metric: Metric) -> Result<Dendrogram> {
    cluster(dataset, &StrategyConfig::new(Strategy::Reliable, criterion).with_metric(metric))
}

pub fn cluster_alpha(dataset: &Dataset, criterion: Criterion, metric: Metric, alpha: f64) -> Result<Dendrogram> {
    cluster(dataset, &StrategyConfig::new(Strategy::Alpha(alpha), criterion).with_metric(metric))
}

/// Reliable or alpha run that reports every level to `observer` before
/// merging. A standard-strategy config is rejected.
pub fn cluster_observed(
    dataset: &Dataset,
    config: &StrategyConfig,
    observer: &mut dyn FnMut(&LevelView<'_>),
) -> Result<Dendrogram> {
    config.validate()?;
    if config.strategy == Strategy::Standard {
        return Err(Error::invalid("level observation is only available for the reliable and alpha strategies"));
    }
    run_reliable(dataset, config, observer)
}

/// A candidate link between clusters `p < q` of one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterEdge {
    pub p: usize,
    pub q: usize,
    pub distance: f64,
    /// Closest object pair, for the single criterion.
    pub witness: Option<(usize, usize)>,
}

impl ClusterEdge {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.p.cmp(&other.p))
            .then(self.q.cmp(&other.q))
    }
}

/// Mutual-nearest-neighbour graph over the clusters of one level: `p` and
/// `q` are adjacent iff `dist(p, q)` equals both `p`'s and `q`'s nearest
/// neighbour distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MutualNnGraph {
    m: usize,
    adjacency: Vec<bool>,
    min_distance: Vec<f64>,
}

impl MutualNnGraph {
    pub fn from_distances(distances: &ClusterDistances) -> Self {
        let m = distances.len();
        let min_distance = distances.row_minima();
        let mut adjacency = vec![false; m * m];
        for p in 0..m {
            for q in (p + 1)..m {
                let d = distances.get(p, q);
                if d == min_distance[p] && d == min_distance[q] {
                    adjacency[p * m + q] = true;
                    adjacency[q * m + p] = true;
                }
            }
        }
        MutualNnGraph {
            m,
            adjacency,
            min_distance,
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.adjacency[p * self.m + q]
    }

    pub fn min_distance(&self, p: usize) -> f64 {
        self.min_distance[p]
    }

    pub fn neighbors(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&q| self.has_edge(p, q))
    }

    /// Edges with `p < q`, ascending by `(p, q)`.
    pub fn edges(&self, distances: &ClusterDistances) -> Vec<ClusterEdge> {
        let mut out = Vec::new();
        for p in 0..self.m {
            for q in (p + 1)..self.m {
                if self.has_edge(p, q) {
                    out.push(ClusterEdge {
                        p,
                        q,
                        distance: distances.get(p, q),
                        witness: distances.witness(p, q),
                    });
                }
            }
        }
        out
    }
}

/// Snapshot of one level of a reliable or alpha run, taken before merging.
#[derive(Debug)]
pub struct LevelView<'a> {
    /// The level being built; `clusters` are those of `level - 1`.
    pub level: usize,
    pub clusters: &'a [Cluster],
    pub distances: &'a ClusterDistances,
    pub graph: &'a MutualNnGraph,
    /// Edges selected for merging at this level.
    pub kept: &'a [ClusterEdge],
}

/// Keeps the `ceil(alpha * E)` smallest edges by `(distance, p, q)`, at least
/// one when `edges` is non-empty.
pub fn select_alpha_edges(edges: &[ClusterEdge], alpha: f64) -> Result<Vec<ClusterEdge>> {
    check_alpha(alpha)?;
    let mut sorted = edges.to_vec();
    sorted.sort_by(ClusterEdge::cmp_key);
    let keep = libm::ceil(alpha * edges.len() as f64) as usize;
    sorted.truncate(keep.clamp(1, edges.len().max(1)));
    Ok(sorted)
}

/// Minimum spanning tree of one connected component of clusters, with ties
/// broken by `(smaller id, larger id)`. `edges` may contain edges outside the
/// component; they are ignored.
pub fn decompose_component(component: &[usize], edges: &[ClusterEdge]) -> Result<Vec<ClusterEdge>> {
    let mut ids = component.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let local = |c: usize| ids.binary_search(&c).ok();
    let mut inside: Vec<(usize, usize, ClusterEdge)> = edges
        .iter()
        .filter_map(|e| Some((local(e.p)?, local(e.q)?, *e)))
        .collect();
    inside.sort_by(|a, b| a.2.cmp_key(&b.2));
    let mut uf = UnionFind::new(ids.len());
    let mut tree = Vec::with_capacity(ids.len().saturating_sub(1));
    for (a, b, e) in inside {
        if uf.union(a, b) {
            tree.push(e);
        }
    }
    if tree.len() + 1 != ids.len() {
        return Err(Error::Internal("component is not connected by its edges"));
    }
    Ok(tree)
}

fn record_for(edge: &ClusterEdge, clusters: &[Cluster], level: usize) -> LinkageRecord {
    let (a, b) = edge
        .witness
        .unwrap_or((clusters[edge.p].rep(), clusters[edge.q].rep()));
    LinkageRecord::new(a, b, edge.distance, level)
}

fn run_reliable(
    dataset: &Dataset,
    config: &StrategyConfig,
    observer: &mut dyn FnMut(&LevelView<'_>),
) -> Result<Dendrogram> {
    let linkage = Linkage::new(dataset, config.criterion, config.metric)?;
    let n = dataset.n();
    let alpha = match config.strategy {
        Strategy::Alpha(a) => a,
        _ => 1.0,
    };
    let mut clusters: Vec<Cluster> = (0..n).map(Cluster::singleton).collect();
    let mut events = Vec::new();
    let mut level = 0;
    while clusters.len() > 1 && config.max_level.is_none_or(|max| level < max) {
        level += 1;
        let distances = linkage.level_distances(&clusters);
        let graph = MutualNnGraph::from_distances(&distances);
        let edges = graph.edges(&distances);
        if edges.is_empty() {
            return Err(Error::Internal("no mutual nearest neighbours among the current clusters"));
        }
        let kept = if alpha >= 1.0 {
            edges
        } else {
            select_alpha_edges(&edges, alpha)?
        };
        observer(&LevelView {
            level,
            clusters: &clusters,
            distances: &distances,
            graph: &graph,
            kept: &kept,
        });

        let m = clusters.len();
        let mut uf = UnionFind::new(m);
        for e in &kept {
            uf.union(e.p, e.q);
        }
        let (labels, k) = uf.labels();
        let mut components = vec![Vec::new(); k];
        for (c, &l) in labels.iter().enumerate() {
            components[l].push(c);
        }
        // Components are numbered by their smallest cluster id, which is also
        // the order of their smallest members: that is the next level's ids.
        for (output, component) in components.iter().enumerate() {
            if component.len() > 1 {
                let tree = decompose_component(component, &kept)?;
                events.push(MergeEvent {
                    level,
                    inputs: component.clone(),
                    output,
                    linkages: tree.iter().map(|e| record_for(e, &clusters, level)).collect(),
                });
            }
        }
        let mut old: Vec<Option<Cluster>> = clusters.into_iter().map(Some).collect();
        let next = components
            .iter()
            .map(|component| Cluster::merge(component.iter().filter_map(|&c| old[c].take())))
            .collect();
        clusters = next;
    }
    Dendrogram::assemble(n, level, events)
}

fn run_standard(dataset: &Dataset, config: &StrategyConfig) -> Result<Dendrogram> {
    let linkage = Linkage::new(dataset, config.criterion, config.metric)?;
    let n = dataset.n();
    let criterion = config.criterion;
    let singletons: Vec<Cluster> = (0..n).map(Cluster::singleton).collect();
    // Slot i holds the cluster whose smallest member is i.
    let initial = linkage.level_distances(&singletons);
    let mut dist: Vec<f64> = Vec::with_capacity(n * n);
    let mut witness: Vec<(usize, usize)> = Vec::new();
    for p in 0..n {
        for q in 0..n {
            dist.push(initial.get(p, q));
            if criterion == Criterion::Single {
                witness.push(initial.witness(p, q).unwrap_or((p, q)));
            }
        }
    }
    drop(initial);
    let mut slots: Vec<Option<Cluster>> = singletons.into_iter().map(Some).collect();
    let mut centroids: Vec<Vec<f64>> = match linkage.points() {
        Some(points) => (0..n).map(|i| points.row(i).to_vec()).collect(),
        None => Vec::new(),
    };
    let mut active: Vec<usize> = (0..n).collect();
    let mut events = Vec::with_capacity(n.saturating_sub(1));
    let mut level = 0;

    while active.len() > 1 && config.max_level.is_none_or(|max| level < max) {
        level += 1;
        // Smallest distance, ties to the lexicographically smallest pair.
        let mut best: Option<(f64, usize, usize)> = None;
        for (ri, &p) in active.iter().enumerate() {
            let row = &dist[p * n..(p + 1) * n];
            for (rj, &q) in active.iter().enumerate().skip(ri + 1) {
                let v = row[q];
                if best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, ri, rj));
                }
            }
        }
        let (distance, rp, rq) = best.ok_or(Error::Internal("no candidate pair"))?;
        let (p, q) = (active[rp], active[rq]);
        let (a, b) = if criterion == Criterion::Single {
            witness[p * n + q]
        } else {
            (p, q)
        };
        events.push(MergeEvent {
            level,
            inputs: vec![rp, rq],
            output: rp,
            linkages: vec![LinkageRecord::new(a, b, distance, level)],
        });

        let absorbed = slots[q].take().ok_or(Error::Internal("merged slot is empty"))?;
        let merged = Cluster::merge([slots[p].take().ok_or(Error::Internal("merged slot is empty"))?, absorbed]);
        active.remove(rq);
        match criterion {
            Criterion::Single | Criterion::Complete => {
                for &r in &active {
                    if r == p {
                        continue;
                    }
                    let (vp, vq) = (dist[p * n + r], dist[q * n + r]);
                    let take_q = match criterion {
                        Criterion::Single => {
                            let (wp, wq) = (witness[p * n + r], witness[q * n + r]);
                            vq < vp || (vq == vp && wq < wp)
                        }
                        _ => vq > vp,
                    };
                    if take_q {
                        dist[p * n + r] = vq;
                        dist[r * n + p] = vq;
                        if criterion == Criterion::Single {
                            let w = witness[q * n + r];
                            witness[p * n + r] = w;
                            witness[r * n + p] = w;
                        }
                    }
                }
            }
            Criterion::Average => {
                for &r in &active {
                    if r == p {
                        continue;
                    }
                    let other = slots[r].as_ref().ok_or(Error::Internal("active slot is empty"))?;
                    let v = linkage.dist(merged.members(), other.members());
                    dist[p * n + r] = v;
                    dist[r * n + p] = v;
                }
            }
            Criterion::Centroid | Criterion::Ward => {
                let points = linkage.points().ok_or(Error::Internal("centroid criterion without points"))?;
                centroids[p] = centroid(points, merged.members());
                for &r in &active {
                    if r == p {
                        continue;
                    }
                    let size_r = slots[r].as_ref().map_or(0, Cluster::len);
                    let v = linkage.centroid_distance(&centroids[p], merged.len(), &centroids[r], size_r);
                    dist[p * n + r] = v;
                    dist[r * n + p] = v;
                }
            }
        }
        slots[p] = Some(merged);
    }
    Dendrogram::assemble(n, level, events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Dataset {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    fn triples(d: &Dendrogram) -> Vec<(usize, usize, f64, usize)> {
        d.records().iter().map(|r| (r.a, r.b, r.distance, r.level)).collect()
    }

    const SQ: Metric = Metric::SquaredEuclidean;

    #[test]
    fn standard_merge_order() {
        let d = cluster_standard(&line(&[0.0, 1.0, 3.0, 3.5]), Criterion::Single, SQ).unwrap();
        assert_eq!(triples(&d), vec![(2, 3, 0.25, 1), (0, 1, 1.0, 2), (1, 2, 4.0, 3)]);
        assert_eq!(d.events().len(), 3);
        assert!(d.events().iter().all(|e| e.inputs.len() == 2));
    }

    #[test]
    fn degenerate_sizes() {
        for strategy in [Strategy::Standard, Strategy::Reliable, Strategy::Alpha(0.3)] {
            let cfg = StrategyConfig::new(strategy, Criterion::Average);
            let one = cluster(&line(&[4.0]), &cfg).unwrap();
            assert!(one.records().is_empty());
            assert_eq!(one.levels(), 0);
            let two = cluster(&line(&[1.0, 3.0]), &cfg).unwrap();
            assert_eq!(triples(&two), vec![(0, 1, 4.0, 1)]);
        }
    }

    #[test]
    fn reliable_merges_both_pairs_at_once() {
        let d = cluster_reliable(&line(&[0.0, 1.0, 3.0, 3.5]), Criterion::Single, SQ).unwrap();
        assert_eq!(d.levels(), 2);
        assert_eq!(triples(&d), vec![(2, 3, 0.25, 1), (0, 1, 1.0, 1), (1, 2, 4.0, 2)]);
        let ev = d.events();
        assert_eq!(ev.len(), 3);
        assert_eq!((ev[0].level, ev[0].inputs.clone(), ev[0].output), (1, vec![0, 1], 0));
        assert_eq!((ev[1].level, ev[1].inputs.clone(), ev[1].output), (1, vec![2, 3], 1));
        assert_eq!((ev[2].level, ev[2].inputs.clone(), ev[2].output), (2, vec![0, 1], 0));
    }

    #[test]
    fn tie_chain_is_one_event() {
        let d = cluster_reliable(&line(&[0.0, 1.0, 2.0]), Criterion::Single, SQ).unwrap();
        assert_eq!(d.levels(), 1);
        assert_eq!(d.events().len(), 1);
        assert_eq!(d.events()[0].inputs, vec![0, 1, 2]);
        assert_eq!(d.events()[0].linkages.len(), 2);
    }

    #[test]
    fn outlier_joins_late() {
        let d = cluster_reliable(&line(&[0.0, 1.0, 2.5]), Criterion::Single, SQ).unwrap();
        assert_eq!(d.levels(), 2);
        assert_eq!(d.events()[0].inputs, vec![0, 1]);
        assert_eq!(d.join_levels(), &[1, 1, 2]);
    }

    #[test]
    fn alpha_half_keeps_smallest_edge() {
        let data = line(&[0.0, 1.0, 3.0, 3.5]);
        let mut first = Vec::new();
        let cfg = StrategyConfig::new(Strategy::Alpha(0.5), Criterion::Single);
        cluster_observed(&data, &cfg, &mut |v| {
            if v.level == 1 {
                first = v.kept.to_vec();
            }
        })
        .unwrap();
        assert_eq!(first.len(), 1);
        assert_eq!((first[0].p, first[0].q, first[0].distance), (2, 3, 0.25));
        let d = cluster_alpha(&data, Criterion::Single, SQ, 0.5).unwrap();
        let level1: Vec<Vec<usize>> = d.clusters_at_level(1).iter().map(|c| c.members().to_vec()).collect();
        assert_eq!(level1, vec![vec![0], vec![1], vec![2, 3]]);
    }

    #[test]
    fn alpha_ceiling() {
        let e = |p, q, distance| ClusterEdge {
            p,
            q,
            distance,
            witness: None,
        };
        let edges = [e(0, 1, 1.0), e(2, 3, 0.25)];
        let kept = select_alpha_edges(&edges, 0.01).unwrap();
        assert_eq!(kept, vec![e(2, 3, 0.25)]);
        assert_eq!(select_alpha_edges(&edges, 0.51).unwrap().len(), 2);
        assert_eq!(select_alpha_edges(&edges, 1.0).unwrap().len(), 2);
    }

    #[test]
    fn alpha_out_of_range() {
        let data = line(&[0.0, 1.0]);
        for a in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                cluster_alpha(&data, Criterion::Single, SQ, a),
                Err(Error::InvalidInput(_))
            ));
        }
    }

    #[test]
    fn alpha_one_is_reliable() {
        let data = line(&[0.0, 0.7, 3.0, 3.1, 9.0, 9.4, 20.0]);
        for c in Criterion::ALL {
            assert_eq!(
                cluster_alpha(&data, c, SQ, 1.0).unwrap(),
                cluster_reliable(&data, c, SQ).unwrap()
            );
        }
    }

    #[test]
    fn decompose_examples() {
        let e = |p, q, distance| ClusterEdge {
            p,
            q,
            distance,
            witness: None,
        };
        let path = [e(0, 1, 1.0), e(1, 2, 1.0)];
        assert_eq!(decompose_component(&[0, 1, 2], &path).unwrap(), path.to_vec());
        let triangle = [e(0, 1, 1.0), e(0, 2, 2.0), e(1, 2, 1.0)];
        assert_eq!(
            decompose_component(&[0, 1, 2], &triangle).unwrap(),
            vec![e(0, 1, 1.0), e(1, 2, 1.0)]
        );
        assert_eq!(decompose_component(&[3, 5], &[e(3, 5, 2.0)]).unwrap(), vec![e(3, 5, 2.0)]);
        assert!(matches!(
            decompose_component(&[0, 1, 2], &[e(0, 1, 1.0)]),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn duplicates_merge_at_zero() {
        let d = cluster_reliable(&line(&[2.0, 2.0, 2.0, 7.0]), Criterion::Average, SQ).unwrap();
        assert_eq!(d.records()[0].distance, 0.0);
        assert_eq!(d.records()[1].distance, 0.0);
        assert_eq!(d.join_levels()[..3], [1, 1, 1]);
    }

    #[test]
    fn max_level_stops_early() {
        let cfg = StrategyConfig::new(Strategy::Reliable, Criterion::Single).with_max_level(1);
        let d = cluster(&line(&[0.0, 1.0, 2.5]), &cfg).unwrap();
        assert!(!d.is_complete());
        assert_eq!(d.records().len(), 1);
        assert_eq!(d.join_levels(), &[1, 1, 0]);
    }

    #[test]
    fn mutual_graph_contains_global_minimum() {
        let data = line(&[0.0, 1.0, 2.5, 6.0, 6.2]);
        let l = Linkage::new(&data, Criterion::Single, SQ).unwrap();
        let singles: Vec<Cluster> = (0..5).map(Cluster::singleton).collect();
        let dists = l.level_distances(&singles);
        let g = MutualNnGraph::from_distances(&dists);
        assert!(g.has_edge(3, 4));
        assert!(g.has_edge(0, 1));
        assert!(!g.has_edge(1, 2));
        assert_eq!(g.neighbors(2).count(), 0);
    }
}
