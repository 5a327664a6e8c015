//! Error type shared by all algorithms in this crate.

use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A dataset was constructed with no rows or no features.
    EmptyDataset,
    /// Row/column counts do not match the length of the backing storage.
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    /// A dataset entry is NaN or infinite.
    NonFiniteValue { row: usize, col: usize },
    /// Centers and dataset disagree on dimensionality.
    DimensionMismatch { expected: usize, actual: usize },
    /// A quantized center refers to a row outside the dataset.
    RowOutOfBounds { row: usize, n: usize },
    /// More clusters requested than there are dataset rows.
    TooManyClusters { k: usize, n: usize },
    /// Zero clusters requested.
    ZeroClusters,
    /// An assignment does not fit the dataset/centers it is used with.
    InconsistentAssignment,
    /// A configuration field violates its documented bounds.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyDataset => write!(f, "dataset must have at least one row and one feature"),
            Error::ShapeMismatch { rows, cols, len } => write!(
                f,
                "{rows}x{cols} dataset needs {} values, got {len}",
                rows * cols
            ),
            Error::NonFiniteValue { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::RowOutOfBounds { row, n } => {
                write!(f, "center row index {row} out of bounds for {n} rows")
            }
            Error::TooManyClusters { k, n } => {
                write!(f, "cannot place {k} clusters on {n} dataset rows")
            }
            Error::ZeroClusters => write!(f, "cluster count must be at least 1"),
            Error::InconsistentAssignment => {
                write!(f, "assignment is inconsistent with the dataset or centers")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
