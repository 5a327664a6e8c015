//! In-memory dataset representation, feature normalization and synthetic
//! mixture fixtures.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::objective::Assignment;

/// An immutable N x d matrix of observations, row-major.
///
/// Row order is stable: row `i` denotes the same observation for the lifetime
/// of the value. All entries are finite; this is checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    points: Vec<f64>,
    n: usize,
    d: usize,
    labels: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from row-major storage, validating shape and finiteness.
    pub fn new(name: impl Into<String>, n: usize, d: usize, points: Vec<f64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyDataset);
        }
        if points.len() != n * d {
            return Err(Error::ShapeMismatch {
                rows: n,
                cols: d,
                len: points.len(),
            });
        }
        for (i, v) in points.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    row: i / d,
                    col: i % d,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            points,
            n,
            d,
            labels: None,
        })
    }

    /// Attaches one label per row (e.g. a class column kept for reporting).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InconsistentAssignment);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of rows N.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    /// Dimensionality d.
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    /// Raw row-major storage.
    pub fn values(&self) -> &[f64] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// How features are rescaled before clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizeMode {
    #[default]
    None,
    /// Per feature: subtract the mean, divide by the population standard
    /// deviation. Constant features map to 0.
    ZScore,
    /// Per feature: affine map onto [0, 1]. Constant features map to 0.
    MinMax,
}

/// The per-feature parameters a normalization applied, recorded so the same
/// transform can be replayed on other data.
///
/// Each output value is `(x - offset) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSpec {
    pub mode: NormalizeMode,
    pub offsets: Vec<f64>,
    pub scales: Vec<f64>,
}

/// Rescales every feature of `ds` according to `mode`.
///
/// Returns a dataset of identical shape plus the parameters used.
/// `NormalizeMode::None` returns an identical copy.
pub fn normalize(ds: &Dataset, mode: NormalizeMode) -> (Dataset, NormalizationSpec) {
    let (n, d) = (ds.len(), ds.dim());
    let mut offsets = vec![0.0; d];
    let mut scales = vec![1.0; d];

    match mode {
        NormalizeMode::None => {}
        NormalizeMode::ZScore => {
            for j in 0..d {
                let mut sum = 0.0;
                for i in 0..n {
                    sum += ds.row(i)[j];
                }
                let mean = sum / n as f64;
                let mut var = 0.0;
                for i in 0..n {
                    let dev = ds.row(i)[j] - mean;
                    var += dev * dev;
                }
                let std = libm::sqrt(var / n as f64);
                offsets[j] = mean;
                scales[j] = if std > 0.0 { std } else { 1.0 };
            }
        }
        NormalizeMode::MinMax => {
            for j in 0..d {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..n {
                    let v = ds.row(i)[j];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                offsets[j] = lo;
                scales[j] = if hi > lo { hi - lo } else { 1.0 };
            }
        }
    }

    let mut points = Vec::with_capacity(n * d);
    for i in 0..n {
        for j in 0..d {
            points.push((ds.row(i)[j] - offsets[j]) / scales[j]);
        }
    }
    let mut out = Dataset::new(ds.name(), n, d, points).expect("normalization preserves shape");
    out.labels = ds.labels.clone();
    let spec = NormalizationSpec {
        mode,
        offsets,
        scales,
    };
    (out, spec)
}

/// Draws `k * per_cluster_n` points from `k` unit-variance spherical
/// Gaussians in `d` dimensions and returns them with the generating
/// assignment.
///
/// Component means are spaced `separation` apart along the first axis, so all
/// pairwise mean distances are at least `separation`. Pure function of its
/// arguments: the same seed reproduces the dataset bit for bit.
pub fn synth_gaussian_mixture(
    k: usize,
    per_cluster_n: usize,
    d: usize,
    separation: f64,
    seed: u64,
) -> (Dataset, Assignment) {
    assert!(k >= 1 && per_cluster_n >= 1 && d >= 1, "k, n, d must be >= 1");
    assert!(separation > 0.0, "separation must be positive");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k * per_cluster_n;
    let mut points = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for c in 0..k {
        let shift = c as f64 * separation;
        for _ in 0..per_cluster_n {
            for j in 0..d {
                let z: f64 = StandardNormal.sample(&mut rng);
                points.push(if j == 0 { z + shift } else { z });
            }
            labels.push(c);
        }
    }
    let name = format!("synth-k{k}-n{per_cluster_n}-d{d}");
    let ds = Dataset::new(name, n, d, points).expect("generated points are finite");
    let assignment = Assignment::new(labels, k).expect("generated labels are in range");
    (ds, assignment)
}
