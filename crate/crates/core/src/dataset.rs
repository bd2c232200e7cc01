//! Input data: point coordinates or a precomputed dissimilarity matrix.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest asymmetry `|D[i][j] - D[j][i]|` tolerated in a dissimilarity
/// matrix before it is rejected. Accepted matrices are symmetrized by
/// averaging.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Base dissimilarity between two coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    #[default]
    SquaredEuclidean,
    Euclidean,
}

impl Metric {
    /// Coordinates are accumulated in ascending index order.
    pub fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        let sq = squared_euclidean(a, b);
        match self {
            Metric::SquaredEuclidean => sq,
            Metric::Euclidean => libm::sqrt(sq),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::SquaredEuclidean => "sqeuclidean",
            Metric::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sqeuclidean" | "squared-euclidean" | "squared_euclidean" => Ok(Metric::SquaredEuclidean),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(Error::invalid(format!("unknown metric `{other}`"))),
        }
    }
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .fold(0.0, |acc, t| acc + t)
}

/// Row-major `n x d` coordinate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl Points {
    pub fn new(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dataset must contain at least one object"));
        }
        if d == 0 {
            return Err(Error::invalid("points must have at least one coordinate"));
        }
        if data.len() != n * d {
            return Err(Error::invalid(format!(
                "dimension mismatch: expected {n} x {d} = {} values, got {}",
                n * d,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate at row {}, column {}",
                pos / d,
                pos % d
            )));
        }
        Ok(Points { n, d, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Symmetric, zero-diagonal, nonnegative `n x n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dissimilarities {
    n: usize,
    data: Vec<f64>,
}

impl Dissimilarities {
    /// Validates and symmetrizes a full row-major matrix.
    pub fn new(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dataset must contain at least one object"));
        }
        if data.len() != n * n {
            return Err(Error::invalid(format!(
                "dimension mismatch: expected {n} x {n} = {} values, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            for j in i..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::invalid(format!("non-finite dissimilarity at ({i}, {j})")));
                }
                if a < 0.0 || b < 0.0 {
                    return Err(Error::invalid(format!("negative dissimilarity at ({i}, {j})")));
                }
                if libm::fabs(a - b) > SYMMETRY_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "dissimilarity matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                if i == j {
                    if a > SYMMETRY_TOLERANCE {
                        return Err(Error::invalid(format!("nonzero diagonal entry at ({i}, {i})")));
                    }
                    data[i * n + i] = 0.0;
                } else if a != b {
                    let mean = 0.5 * (a + b);
                    data[i * n + j] = mean;
                    data[j * n + i] = mean;
                }
            }
        }
        Ok(Dissimilarities { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    Points,
    Dissimilarity,
}

/// The objects to cluster, as coordinates or as pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Points(Points),
    Dissimilarity(Dissimilarities),
}

impl Dataset {
    /// Builds a point dataset from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::invalid(format!(
                    "dimension mismatch: row {i} has {} columns, expected {d}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Points::new(n, d, data).map(Dataset::Points)
    }

    pub fn from_points(n: usize, d: usize, data: Vec<f64>) -> Result<Self> {
        Points::new(n, d, data).map(Dataset::Points)
    }

    pub fn from_dissimilarities(n: usize, data: Vec<f64>) -> Result<Self> {
        Dissimilarities::new(n, data).map(Dataset::Dissimilarity)
    }

    pub fn kind(&self) -> DatasetKind {
        match self {
            Dataset::Points(_) => DatasetKind::Points,
            Dataset::Dissimilarity(_) => DatasetKind::Dissimilarity,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Dataset::Points(p) => p.n(),
            Dataset::Dissimilarity(d) => d.n(),
        }
    }

    pub fn points(&self) -> Option<&Points> {
        match self {
            Dataset::Points(p) => Some(p),
            Dataset::Dissimilarity(_) => None,
        }
    }
}

/// Full pairwise dissimilarity matrix of a dataset. A dissimilarity dataset
/// is returned unchanged and `metric` is ignored.
pub fn pairwise_dissimilarities(dataset: &Dataset, metric: Metric) -> Dissimilarities {
    match dataset {
        Dataset::Dissimilarity(d) => d.clone(),
        Dataset::Points(p) => {
            let n = p.n();
            let mut data = alloc::vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = metric.eval(p.row(i), p.row(j));
                    data[i * n + j] = v;
                    data[j * n + i] = v;
                }
            }
            Dissimilarities { n, data }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn scalar_loop(xs: &[f64], i: usize, j: usize) -> f64 {
        let t = xs[i] - xs[j];
        t * t
    }

    #[test]
    fn squared_euclidean_on_line() {
        let xs = [0.0, 1.0, 10.0, 12.0];
        let data = Dataset::from_rows(&[[0.0], [1.0], [10.0], [12.0]]).unwrap();
        let d = pairwise_dissimilarities(&data, Metric::SquaredEuclidean);
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(2, 3), 4.0);
        assert_eq!(d.get(1, 2), 81.0);
        for i in 0..4 {
            assert_eq!(d.get(i, i), 0.0);
            for j in 0..4 {
                assert_eq!(d.get(i, j), d.get(j, i));
                assert_eq!(d.get(i, j), scalar_loop(&xs, i, j));
            }
        }
    }

    #[test]
    fn identical_points_have_zero_dissimilarity() {
        let data = Dataset::from_rows(&[[1.5, -2.0], [1.5, -2.0]]).unwrap();
        assert_eq!(pairwise_dissimilarities(&data, Metric::Euclidean).get(0, 1), 0.0);
    }

    #[test]
    fn euclidean_vs_squared() {
        let data = Dataset::from_rows(&[[0.0], [3.0]]).unwrap();
        assert_eq!(pairwise_dissimilarities(&data, Metric::Euclidean).get(0, 1), 3.0);
        assert_eq!(pairwise_dissimilarities(&data, Metric::SquaredEuclidean).get(0, 1), 9.0);
    }

    #[test]
    fn dissimilarity_passes_through() {
        let data = Dataset::from_dissimilarities(2, vec![0.0, 2.5, 2.5, 0.0]).unwrap();
        let d = pairwise_dissimilarities(&data, Metric::Euclidean);
        assert_eq!(d.get(1, 0), 2.5);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: [&[f64]; 2] = [&[0.0, 1.0], &[2.0]];
        assert!(matches!(Dataset::from_rows(&rows), Err(Error::InvalidInput(_))));
        assert!(Dataset::from_points(2, 2, vec![0.0; 3]).is_err());
        assert!(Dataset::from_points(0, 2, vec![]).is_err());
        assert!(Dataset::from_points(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn tiny_asymmetry_is_averaged() {
        let d = Dissimilarities::new(2, vec![0.0, 1.0, 1.0 + 5e-10, 0.0]).unwrap();
        assert_eq!(d.get(0, 1), d.get(1, 0));
        assert!((d.get(0, 1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_matrices_rejected() {
        assert!(Dissimilarities::new(2, vec![0.0, 1.0, 1.1, 0.0]).is_err());
        assert!(Dissimilarities::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(Dissimilarities::new(2, vec![1.0, 1.0, 1.0, 0.0]).is_err());
        assert!(Dissimilarities::new(2, vec![0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn metric_parses() {
        assert_eq!("euclidean".parse::<Metric>().unwrap(), Metric::Euclidean);
        assert_eq!("sqeuclidean".parse::<Metric>().unwrap(), Metric::SquaredEuclidean);
        assert!("manhattan".parse::<Metric>().is_err());
    }
}
