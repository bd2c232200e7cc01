//! Inter-cluster distances under the five supported criteria.
//!
//! Distances are always recomputed from cluster members. Sums over cross
//! pairs are accumulated in ascending `(i, j)` order with `i < j`, so a value
//! is bitwise identical no matter which code path computed it.

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dataset::{pairwise_dissimilarities, squared_euclidean, Dataset, Dissimilarities, Metric, Points};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Distance between the closest cross pair.
    Single,
    /// Distance between the farthest cross pair.
    Complete,
    /// Mean over all `|P| * |Q|` cross pairs.
    Average,
    /// Base metric applied to the two centroids.
    Centroid,
    /// `|P||Q| / (|P| + |Q|) * ||m_P - m_Q||^2`.
    Ward,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::Single,
        Criterion::Complete,
        Criterion::Average,
        Criterion::Centroid,
        Criterion::Ward,
    ];

    /// Centroid and Ward are defined on coordinates only.
    pub fn requires_points(self) -> bool {
        matches!(self, Criterion::Centroid | Criterion::Ward)
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Single => "single",
            Criterion::Complete => "complete",
            Criterion::Average => "average",
            Criterion::Centroid => "centroid",
            Criterion::Ward => "ward",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown linkage criterion `{s}`")))
    }
}

/// Inter-cluster distance together with the object pair that realizes it.
/// Only the single criterion has a witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterDistance {
    pub value: f64,
    /// `(i, j)` with `i < j`; the smallest such pair among ties.
    pub witness: Option<(usize, usize)>,
}

/// Nearest neighbours of one cluster among the current clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestNeighbors {
    pub min_distance: f64,
    /// Every other cluster at exactly `min_distance`, ascending.
    pub neighbors: Vec<usize>,
}

#[derive(Debug)]
enum Base<'a> {
    Matrix(Cow<'a, Dissimilarities>),
    Points(&'a Points),
}

/// A criterion bound to a dataset.
#[derive(Debug)]
pub struct Linkage<'a> {
    criterion: Criterion,
    metric: Metric,
    base: Base<'a>,
}

impl<'a> Linkage<'a> {
    /// Fails with [`Error::CriterionUnsupported`] for centroid or Ward on a
    /// dissimilarity dataset.
    pub fn new(dataset: &'a Dataset, criterion: Criterion, metric: Metric) -> Result<Self> {
        let base = match (dataset, criterion.requires_points()) {
            (Dataset::Points(p), true) => Base::Points(p),
            (Dataset::Dissimilarity(_), true) => return Err(Error::CriterionUnsupported(criterion)),
            (Dataset::Dissimilarity(d), false) => Base::Matrix(Cow::Borrowed(d)),
            (Dataset::Points(_), false) => {
                Base::Matrix(Cow::Owned(pairwise_dissimilarities(dataset, metric)))
            }
        };
        Ok(Linkage { criterion, metric, base })
    }

    pub fn criterion(&self) -> Criterion {
        self.criterion
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn n(&self) -> usize {
        match &self.base {
            Base::Matrix(d) => d.n(),
            Base::Points(p) => p.n(),
        }
    }

    /// Object-level dissimilarities, when the criterion works on them.
    pub fn dissimilarities(&self) -> Option<&Dissimilarities> {
        match &self.base {
            Base::Matrix(d) => Some(d),
            Base::Points(_) => None,
        }
    }

    /// `dist(P, Q)` for two disjoint, non-empty, sorted member lists.
    pub fn dist(&self, p: &[usize], q: &[usize]) -> f64 {
        self.dist_with_witness(p, q).value
    }

    pub fn dist_with_witness(&self, p: &[usize], q: &[usize]) -> ClusterDistance {
        debug_assert!(!p.is_empty() && !q.is_empty());
        match &self.base {
            Base::Matrix(d) => {
                let mut acc = Accumulator::new(self.criterion);
                for_each_cross_pair(p, q, |i, j| acc.push(d.get(i, j), i, j));
                acc.finish(p.len(), q.len())
            }
            Base::Points(points) => {
                let mp = centroid(points, p);
                let mq = centroid(points, q);
                ClusterDistance {
                    value: self.centroid_distance(&mp, p.len(), &mq, q.len()),
                    witness: None,
                }
            }
        }
    }

    pub(crate) fn centroid_distance(&self, mp: &[f64], np: usize, mq: &[f64], nq: usize) -> f64 {
        match self.criterion {
            Criterion::Ward => {
                let (np, nq) = (np as f64, nq as f64);
                np * nq / (np + nq) * squared_euclidean(mp, mq)
            }
            _ => self.metric.eval(mp, mq),
        }
    }

    pub(crate) fn points(&self) -> Option<&Points> {
        match &self.base {
            Base::Points(p) => Some(p),
            Base::Matrix(_) => None,
        }
    }

    /// All pairwise distances between the given clusters. Each cluster's
    /// members must be sorted; clusters must be disjoint.
    pub fn level_distances<C: AsRef<[usize]>>(&self, clusters: &[C]) -> ClusterDistances {
        let m = clusters.len();
        let mut values = vec![0.0; m * m];
        let mut witnesses = None;
        match &self.base {
            Base::Matrix(d) => {
                let n = d.n();
                let mut label = vec![usize::MAX; n];
                for (c, members) in clusters.iter().enumerate() {
                    for &i in members.as_ref() {
                        label[i] = c;
                    }
                }
                let single = self.criterion == Criterion::Single;
                values.fill(initial_value(self.criterion));
                let mut wit: Vec<(u32, u32)> = if single { vec![(0, 0); m * m] } else { Vec::new() };
                // Visiting all object pairs in ascending (i, j) order gives every
                // cluster pair the same summation order as `dist_with_witness`.
                for i in 0..n {
                    let a = label[i];
                    if a == usize::MAX {
                        continue;
                    }
                    let row = d.row(i);
                    for (j, &v) in row.iter().enumerate().skip(i + 1) {
                        let b = label[j];
                        if b == usize::MAX || b == a {
                            continue;
                        }
                        let cell = if a < b { a * m + b } else { b * m + a };
                        match self.criterion {
                            Criterion::Single => {
                                if v < values[cell] {
                                    values[cell] = v;
                                    wit[cell] = (i as u32, j as u32);
                                }
                            }
                            Criterion::Complete => {
                                if v > values[cell] {
                                    values[cell] = v;
                                }
                            }
                            _ => values[cell] += v,
                        }
                    }
                }
                for p in 0..m {
                    values[p * m + p] = 0.0;
                    let np = clusters[p].as_ref().len() as f64;
                    for q in (p + 1)..m {
                        let mut v = values[p * m + q];
                        if self.criterion == Criterion::Average {
                            v /= np * clusters[q].as_ref().len() as f64;
                            values[p * m + q] = v;
                        }
                        values[q * m + p] = v;
                        if single {
                            wit[q * m + p] = wit[p * m + q];
                        }
                    }
                }
                if single {
                    witnesses = Some(wit);
                }
            }
            Base::Points(points) => {
                let centroids: Vec<Vec<f64>> = clusters.iter().map(|c| centroid(points, c.as_ref())).collect();
                for p in 0..m {
                    let np = clusters[p].as_ref().len();
                    for q in (p + 1)..m {
                        let v = self.centroid_distance(&centroids[p], np, &centroids[q], clusters[q].as_ref().len());
                        values[p * m + q] = v;
                        values[q * m + p] = v;
                    }
                }
            }
        }
        ClusterDistances { m, values, witnesses }
    }

    /// Per-cluster minimum distance and the full set of clusters attaining it.
    pub fn nearest_neighbors<C: AsRef<[usize]>>(&self, clusters: &[C]) -> Result<Vec<NearestNeighbors>> {
        self.level_distances(clusters).nearest_neighbors()
    }
}

/// Symmetric matrix of distances between the clusters of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterDistances {
    m: usize,
    values: Vec<f64>,
    witnesses: Option<Vec<(u32, u32)>>,
}

impl ClusterDistances {
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.values[p * self.m + q]
    }

    pub fn witness(&self, p: usize, q: usize) -> Option<(usize, usize)> {
        self.witnesses
            .as_ref()
            .map(|w| (w[p * self.m + q].0 as usize, w[p * self.m + q].1 as usize))
    }

    /// Minimum over `q != p` of `get(p, q)`, for every `p`.
    pub fn row_minima(&self) -> Vec<f64> {
        (0..self.m)
            .map(|p| {
                (0..self.m)
                    .filter(|&q| q != p)
                    .map(|q| self.get(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    /// Ties use exact floating-point equality.
    pub fn nearest_neighbors(&self) -> Result<Vec<NearestNeighbors>> {
        if self.m < 2 {
            return Err(Error::InvalidState("nearest neighbours need at least two clusters"));
        }
        let minima = self.row_minima();
        Ok((0..self.m)
            .map(|p| NearestNeighbors {
                min_distance: minima[p],
                neighbors: (0..self.m)
                    .filter(|&q| q != p && self.get(p, q) == minima[p])
                    .collect(),
            })
            .collect())
    }
}

fn initial_value(criterion: Criterion) -> f64 {
    match criterion {
        Criterion::Single => f64::INFINITY,
        Criterion::Complete => f64::NEG_INFINITY,
        _ => 0.0,
    }
}

struct Accumulator {
    criterion: Criterion,
    value: f64,
    witness: (usize, usize),
}

impl Accumulator {
    fn new(criterion: Criterion) -> Self {
        Accumulator {
            criterion,
            value: initial_value(criterion),
            witness: (0, 0),
        }
    }

    #[inline]
    fn push(&mut self, v: f64, i: usize, j: usize) {
        match self.criterion {
            Criterion::Single => {
                if v < self.value {
                    self.value = v;
                    self.witness = (i, j);
                }
            }
            Criterion::Complete => {
                if v > self.value {
                    self.value = v;
                }
            }
            _ => self.value += v,
        }
    }

    fn finish(&self, np: usize, nq: usize) -> ClusterDistance {
        match self.criterion {
            Criterion::Single => ClusterDistance {
                value: self.value,
                witness: Some(self.witness),
            },
            Criterion::Average => ClusterDistance {
                value: self.value / (np as f64 * nq as f64),
                witness: None,
            },
            _ => ClusterDistance {
                value: self.value,
                witness: None,
            },
        }
    }
}

/// Calls `f(i, j)` for every cross pair of two disjoint sorted member lists,
/// normalized to `i < j` and visited in ascending lexicographic order.
pub(crate) fn for_each_cross_pair(p: &[usize], q: &[usize], mut f: impl FnMut(usize, usize)) {
    let (mut a, mut b) = (0, 0);
    while a < p.len() || b < q.len() {
        let take_p = b == q.len() || (a < p.len() && p[a] < q[b]);
        let (i, other) = if take_p {
            a += 1;
            (p[a - 1], q)
        } else {
            b += 1;
            (q[b - 1], p)
        };
        let start = other.partition_point(|&x| x < i);
        for &j in &other[start..] {
            f(i, j);
        }
    }
}

/// Mean of the member rows, summed in ascending member order.
pub(crate) fn centroid(points: &Points, members: &[usize]) -> Vec<f64> {
    let mut c = vec![0.0; points.dim()];
    for &i in members {
        for (acc, x) in c.iter_mut().zip(points.row(i)) {
            *acc += x;
        }
    }
    let size = members.len() as f64;
    for x in &mut c {
        *x /= size;
    }
    c
}
