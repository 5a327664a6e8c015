//! The mathematical core shared by every algorithm in this crate: squared
//! Euclidean distance, nearest-center assignment, the within-cluster sum of
//! squares objective J, and centroid computation.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// An ordered set of K cluster centers in d dimensions.
///
/// Centers are always materialized as real vectors. A center set is
/// *quantized* when every center is a copy of a dataset row; in that case the
/// originating row indices are retained so searches can reason about centers
/// as row identities rather than by floating-point comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    values: Vec<f64>,
    k: usize,
    d: usize,
    /// `Some(rows)` iff quantized; `values[c]` equals the bound dataset's
    /// `row(rows[c])`.
    rows: Option<Vec<usize>>,
}

impl CenterSet {
    /// Builds a quantized center set from dataset rows.
    pub fn from_rows(ds: &Dataset, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::ZeroClusters);
        }
        let d = ds.dim();
        let mut values = Vec::with_capacity(rows.len() * d);
        for &r in rows {
            if r >= ds.len() {
                return Err(Error::RowOutOfBounds { row: r, n: ds.len() });
            }
            values.extend_from_slice(ds.row(r));
        }
        Ok(Self {
            values,
            k: rows.len(),
            d,
            rows: Some(rows.to_vec()),
        })
    }

    /// Builds a free center set from a row-major K x d matrix.
    pub fn free(k: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroClusters);
        }
        if values.len() != k * d {
            return Err(Error::ShapeMismatch {
                rows: k,
                cols: d,
                len: values.len(),
            });
        }
        Ok(Self {
            values,
            k,
            d,
            rows: None,
        })
    }

    /// Number of centers K.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn center(&self, c: usize) -> &[f64] {
        &self.values[c * self.d..(c + 1) * self.d]
    }

    pub fn centers(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.d)
    }

    /// Row-major K x d storage.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Originating dataset rows, present only for quantized sets.
    pub fn rows(&self) -> Option<&[usize]> {
        self.rows.as_deref()
    }

    pub fn is_quantized(&self) -> bool {
        self.rows.is_some()
    }
}

/// A full labeling of a dataset into K clusters.
///
/// Labels are 0-based cluster indices; `counts` is maintained alongside and
/// always consistent with `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
    counts: Vec<usize>,
}

impl Assignment {
    /// Validates that every label is below `k` and derives the counts.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroClusters);
        }
        if labels.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut counts = vec![0usize; k];
        for &c in &labels {
            if c >= k {
                return Err(Error::InconsistentAssignment);
            }
            counts[c] += 1;
        }
        Ok(Self { labels, counts })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Per-cluster sizes; sums to the dataset length.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Number of labeled points.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Indices of the members of cluster `c`, in row order.
    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == c)
            .map(|(i, _)| i)
    }
}

/// Squared Euclidean distance, computed coordinate by coordinate.
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let diff = x - y;
        acc += diff * diff;
    }
    acc
}

/// Labels every point with its nearest center under squared Euclidean
/// distance. Ties go to the lowest cluster index. Clusters may come back
/// empty; repairing that is the caller's policy.
pub fn assign(ds: &Dataset, m: &CenterSet) -> Result<Assignment> {
    if m.dim() != ds.dim() {
        return Err(Error::DimensionMismatch {
            expected: ds.dim(),
            actual: m.dim(),
        });
    }
    let mut labels = Vec::with_capacity(ds.len());
    for x in ds.rows() {
        let mut best = 0usize;
        let mut best_d = dist2(x, m.center(0));
        for c in 1..m.k() {
            let d = dist2(x, m.center(c));
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        labels.push(best);
    }
    Assignment::new(labels, m.k())
}

/// The within-cluster sum of squares J: the sum over all points of the
/// squared distance to their assigned center.
pub fn icss(ds: &Dataset, m: &CenterSet, a: &Assignment) -> Result<f64> {
    if a.len() != ds.len() || a.k() != m.k() {
        return Err(Error::InconsistentAssignment);
    }
    if m.dim() != ds.dim() {
        return Err(Error::DimensionMismatch {
            expected: ds.dim(),
            actual: m.dim(),
        });
    }
    let mut j = 0.0;
    for (i, x) in ds.rows().enumerate() {
        j += dist2(x, m.center(a.label(i)));
    }
    Ok(j)
}

/// The per-cluster mean of the assigned points, which minimizes J for a
/// fixed assignment. Empty clusters keep the corresponding `fallback`
/// center so K never shrinks. The result is always a free center set.
pub fn centroids(ds: &Dataset, a: &Assignment, fallback: &CenterSet) -> CenterSet {
    debug_assert_eq!(a.len(), ds.len());
    debug_assert_eq!(a.k(), fallback.k());
    debug_assert_eq!(fallback.dim(), ds.dim());
    let (k, d) = (a.k(), ds.dim());
    let mut sums = vec![0.0; k * d];
    for (i, x) in ds.rows().enumerate() {
        let c = a.label(i);
        for (s, v) in sums[c * d..(c + 1) * d].iter_mut().zip(x) {
            *s += v;
        }
    }
    for c in 0..k {
        let n_c = a.counts()[c];
        if n_c == 0 {
            sums[c * d..(c + 1) * d].copy_from_slice(fallback.center(c));
        } else {
            for s in &mut sums[c * d..(c + 1) * d] {
                *s /= n_c as f64;
            }
        }
    }
    CenterSet::free(k, d, sums).expect("shape is k*d by construction")
}
