//! K-Means clustering with a quantized-means tabu search optimizer.
//!
//! Lloyd's algorithm is fast but gets stuck in local minima of the
//! intra-cluster sum of squares (ICSS). The tabu search implemented in
//! [`qmts`] explores a finite search space instead: during exploration every
//! cluster center is constrained to an actual dataset point, neighbors are
//! built per cluster by minimizing the exact objective change of a center
//! swap, and a per-cluster tabu memory forbids revisiting previous centers.
//! The best solution found is then refined with unconstrained centers.
//!
//! The crate is `no_std`-compatible (`alloc` required); disable the default
//! `std` feature for embedded use. File IO, the benchmark harness and the CLI
//! live in the companion `qmts-cli` crate.
//!
//! ```
//! use qmts_core::{kmeans, qmts_run, Dataset, LloydConfig, QmtsConfig};
//!
//! let ds = Dataset::new("toy", 6, 2, vec![
//!     1.0, 1.0,  1.2, 0.8,  0.9, 1.1,
//!     8.0, 8.0,  8.1, 7.9,  7.8, 8.2,
//! ])?;
//!
//! let tabu = qmts_run(&ds, 2, QmtsConfig { seed: 7, ..QmtsConfig::default() })?;
//! let lloyd = kmeans(&ds, 2, LloydConfig { seed: 7, ..LloydConfig::default() })?;
//!
//! assert!(tabu.j <= lloyd.j);
//! assert_eq!(tabu.assignment.counts(), &[3, 3]);
//! # Ok::<(), qmts_core::Error>(())
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod lloyd;
pub mod objective;
pub mod qmts;

pub use dataset::{normalize, Dataset, NormalizationSpec, NormalizeMode};
pub use error::{Error, Result};
pub use lloyd::{kmeans, lloyd_run, ClusteringResult, InitMethod, LloydConfig};
pub use objective::{assign, centroids, icss, Assignment, CenterSet};
pub use qmts::{qmts_run, qmts_run_detailed, QmtsConfig, QmtsStats, Refinement, SearchState, TabuList};
