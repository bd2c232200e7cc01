//! Flat clusters from a dendrogram, external validity indices and outlier
//! scores.
//!
//! Entropies are in nats with `0 * ln 0 = 0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dendrogram::{Dendrogram, LinkageRecord};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Dense labelling: every label in `[0, k)` occurs at least once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatPartition {
    labels: Vec<usize>,
    k: usize,
}

impl FlatPartition {
    /// Validates that `labels` is dense.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("label {missing} is unused; labels must be dense in [0, {k})")));
        }
        Ok(FlatPartition { labels, k })
    }

    /// Relabels arbitrary values to `[0, k)` in order of first appearance.
    pub fn from_raw<T: Ord + Clone>(raw: &[T]) -> Self {
        let mut ids = BTreeMap::new();
        let labels = raw
            .iter()
            .map(|v| {
                let next = ids.len();
                *ids.entry(v.clone()).or_insert(next)
            })
            .collect();
        FlatPartition { labels, k: ids.len() }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

/// Removes the `k - 1` last records and labels the remaining components by
/// ascending smallest member.
pub fn cut(dendrogram: &Dendrogram, k: usize) -> Result<FlatPartition> {
    if !dendrogram.is_complete() {
        return Err(Error::InvalidState("cannot cut a dendrogram that did not reach a single cluster"));
    }
    cut_records(dendrogram.n(), dendrogram.records(), k)
}

/// Cuts a spanning set of `n - 1` records given in any order, using their
/// `order` fields.
pub fn cut_records(n: usize, records: &[LinkageRecord], k: usize) -> Result<FlatPartition> {
    if k < 1 || k > n {
        return Err(Error::invalid(format!("k must lie in [1, {n}], got {k}")));
    }
    if records.len() + 1 != n {
        return Err(Error::invalid(format!(
            "expected {} linkage records for {n} objects, got {}",
            n - 1,
            records.len()
        )));
    }
    let keep = n - k;
    let mut uf = UnionFind::new(n);
    for r in records.iter().filter(|r| r.order < keep) {
        if r.a >= n || r.b >= n {
            return Err(Error::invalid(format!("record endpoint out of range: ({}, {})", r.a, r.b)));
        }
        if !uf.union(r.a, r.b) {
            return Err(Error::invalid("linkage records contain a cycle"));
        }
    }
    let (labels, got) = uf.labels();
    if got != k {
        return Err(Error::invalid(format!("record orders are not a permutation of 0..{}", n - 1)));
    }
    Ok(FlatPartition { labels, k })
}

/// `score[i] = join_level[i] / levels`; later joiners score higher.
pub fn outlier_scores(dendrogram: &Dendrogram) -> Result<Vec<f64>> {
    if !dendrogram.is_complete() {
        return Err(Error::InvalidState("outlier scores need a complete dendrogram"));
    }
    let levels = dendrogram.levels();
    if levels == 0 {
        return Ok(vec![1.0; dendrogram.n()]);
    }
    Ok(dendrogram
        .join_levels()
        .iter()
        .map(|&l| l as f64 / levels as f64)
        .collect())
}

/// Counts of objects per (true class, predicted cluster).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn new(truth: &FlatPartition, pred: &FlatPartition) -> Result<Self> {
        if truth.n() != pred.n() {
            return Err(Error::invalid(format!(
                "partitions have different lengths: {} vs {}",
                truth.n(),
                pred.n()
            )));
        }
        let (rows, cols) = (truth.k(), pred.k());
        let mut counts = vec![0u64; rows * cols];
        let mut row_sums = vec![0u64; rows];
        let mut col_sums = vec![0u64; cols];
        for (&t, &p) in truth.labels().iter().zip(pred.labels()) {
            counts[t * cols + p] += 1;
            row_sums[t] += 1;
            col_sums[p] += 1;
        }
        Ok(ContingencyTable {
            rows,
            cols,
            counts,
            row_sums,
            col_sums,
            n: truth.n() as u64,
        })
    }

    pub fn get(&self, t: usize, p: usize) -> u64 {
        self.counts[t * self.cols + p]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.rows).flat_map(move |t| {
            (0..self.cols).filter_map(move |p| {
                let c = self.get(t, p);
                (c > 0).then_some((t, p, c))
            })
        })
    }

    fn entropy(sums: &[u64], n: u64) -> f64 {
        let n = n as f64;
        -sums
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                p * libm::log(p)
            })
            .sum::<f64>()
    }

    /// Entropy of the true classes.
    pub fn truth_entropy(&self) -> f64 {
        Self::entropy(&self.row_sums, self.n)
    }

    /// Entropy of the predicted clusters.
    pub fn pred_entropy(&self) -> f64 {
        Self::entropy(&self.col_sums, self.n)
    }

    pub fn mutual_information(&self) -> f64 {
        let n = self.n as f64;
        self.nonzero()
            .map(|(t, p, c)| {
                let c = c as f64;
                let expected = self.row_sums[t] as f64 * self.col_sums[p] as f64;
                c / n * libm::log(n * c / expected)
            })
            .sum::<f64>()
            .max(0.0)
    }

    /// `H(truth | pred)`.
    pub fn truth_given_pred(&self) -> f64 {
        let n = self.n as f64;
        -self
            .nonzero()
            .map(|(_, p, c)| {
                let c = c as f64;
                c / n * libm::log(c / self.col_sums[p] as f64)
            })
            .sum::<f64>()
    }

    /// `H(pred | truth)`.
    pub fn pred_given_truth(&self) -> f64 {
        let n = self.n as f64;
        -self
            .nonzero()
            .map(|(t, _, c)| {
                let c = c as f64;
                c / n * libm::log(c / self.row_sums[t] as f64)
            })
            .sum::<f64>()
    }
}

fn pairs(c: u64) -> f64 {
    (c as f64) * (c as f64 - 1.0) / 2.0
}

/// Mutual information normalized by `max(H(truth), H(pred))`; 1 when both
/// partitions are trivial.
pub fn nmi(truth: &FlatPartition, pred: &FlatPartition) -> Result<f64> {
    let table = ContingencyTable::new(truth, pred)?;
    let denom = table.truth_entropy().max(table.pred_entropy());
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((table.mutual_information() / denom).clamp(0.0, 1.0))
}

/// Mutual information corrected for chance under the hypergeometric model,
/// normalized by `max(H(truth), H(pred))`. Zero in expectation for random
/// labelings; 1 for identical partitions.
pub fn adjusted_mutual_info(truth: &FlatPartition, pred: &FlatPartition) -> Result<f64> {
    let table = ContingencyTable::new(truth, pred)?;
    let (kt, kp, n) = (table.rows(), table.cols(), table.n());
    if (kt == 1 && kp == 1) || (kt as u64 == n && kp as u64 == n) {
        return Ok(1.0);
    }
    let mi = table.mutual_information();
    let emi = expected_mutual_information(&table);
    let normalizer = table.truth_entropy().max(table.pred_entropy());
    let denom = normalizer - emi;
    let denom = if denom < 0.0 {
        denom.min(-f64::EPSILON)
    } else {
        denom.max(f64::EPSILON)
    };
    Ok((mi - emi) / denom)
}

fn expected_mutual_information(table: &ContingencyTable) -> f64 {
    let n = table.n();
    let nf = n as f64;
    let lg = |x: u64| libm::lgamma(x as f64 + 1.0);
    let ln_n_fact = lg(n);
    let mut emi = 0.0;
    for &a in table.row_sums() {
        for &b in table.col_sums() {
            let start = (a + b).saturating_sub(n).max(1);
            let end = a.min(b);
            let fixed = lg(a) + lg(b) + lg(n - a) + lg(n - b) - ln_n_fact;
            for nij in start..=end {
                let x = nij as f64;
                let log_term = libm::log(nf * x) - libm::log(a as f64 * b as f64);
                let log_prob = fixed - lg(nij) - lg(a - nij) - lg(b - nij) - lg(n + nij - a - b);
                emi += x / nf * log_term * libm::exp(log_prob);
            }
        }
    }
    emi
}

/// Hubert-Arabie adjusted Rand index.
pub fn adjusted_rand(truth: &FlatPartition, pred: &FlatPartition) -> Result<f64> {
    let table = ContingencyTable::new(truth, pred)?;
    let index: f64 = table.nonzero().map(|(_, _, c)| pairs(c)).sum();
    let a: f64 = table.row_sums().iter().map(|&c| pairs(c)).sum();
    let b: f64 = table.col_sums().iter().map(|&c| pairs(c)).sum();
    let total = pairs(table.n());
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = a * b / total;
    let max = 0.5 * (a + b);
    let denom = max - expected;
    if denom == 0.0 {
        // Both partitions are all-singletons or both are one cluster.
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// Homogeneity, completeness and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VMeasure {
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
}

pub fn homogeneity_completeness(truth: &FlatPartition, pred: &FlatPartition) -> Result<VMeasure> {
    let table = ContingencyTable::new(truth, pred)?;
    let (ht, hp) = (table.truth_entropy(), table.pred_entropy());
    let homogeneity = if ht == 0.0 {
        1.0
    } else {
        1.0 - table.truth_given_pred() / ht
    };
    let completeness = if hp == 0.0 {
        1.0
    } else {
        1.0 - table.pred_given_truth() / hp
    };
    let v_measure = if homogeneity + completeness == 0.0 {
        0.0
    } else {
        2.0 * homogeneity * completeness / (homogeneity + completeness)
    };
    Ok(VMeasure {
        homogeneity,
        completeness,
        v_measure,
    })
}

pub fn v_measure(truth: &FlatPartition, pred: &FlatPartition) -> Result<f64> {
    homogeneity_completeness(truth, pred).map(|v| v.v_measure)
}
