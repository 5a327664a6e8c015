//! Lloyd's K-Means and its two standard initializations: uniform random rows
//! and D²-weighted (K-Means++) sampling.

use alloc::vec::Vec;

use rand::distr::Distribution;
use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::objective::{assign, centroids, dist2, icss, Assignment, CenterSet};

/// How initial centers are drawn from the dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMethod {
    /// K distinct rows, uniformly without replacement.
    #[default]
    RandomPoints,
    /// First row uniform, the rest D²-weighted.
    KMeansPlusPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LloydConfig {
    /// Safety cap on E/M iterations; convergence normally stops earlier.
    pub max_iterations: usize,
    pub seed: u64,
    pub init: InitMethod,
}

impl Default for LloydConfig {
    fn default() -> Self {
        Self {
            max_iterations: 300,
            seed: 0,
            init: InitMethod::default(),
        }
    }
}

/// Outcome of one clustering run, shared by every algorithm in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub centers: CenterSet,
    pub assignment: Assignment,
    /// Final within-cluster sum of squares of (centers, assignment).
    pub j: f64,
    pub iterations: usize,
    /// True when another assign/centroid pass would change no label.
    pub converged: bool,
}

fn check_k(ds: &Dataset, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroClusters);
    }
    if k > ds.len() {
        return Err(Error::TooManyClusters { k, n: ds.len() });
    }
    Ok(())
}

/// Samples k distinct dataset rows uniformly without replacement.
pub fn init_random(ds: &Dataset, k: usize, seed: u64) -> Result<CenterSet> {
    check_k(ds, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = rand::seq::index::sample(&mut rng, ds.len(), k).into_vec();
    CenterSet::from_rows(ds, &rows)
}

/// D² seeding: first center uniform, each later center drawn with
/// probability proportional to its squared distance to the nearest center
/// already chosen. Rows at distance zero are never drawn while any row has
/// positive weight; if every remaining row has zero weight (all points
/// coincide with a chosen center), the draw falls back to uniform over the
/// rows not yet chosen, keeping the k centers distinct.
pub fn init_kmeanspp(ds: &Dataset, k: usize, seed: u64) -> Result<CenterSet> {
    check_k(ds, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ds.len();
    let mut rows = Vec::with_capacity(k);
    let first = rng.random_range(0..n);
    rows.push(first);

    let mut min_d2: Vec<f64> = ds.rows().map(|x| dist2(x, ds.row(first))).collect();
    while rows.len() < k {
        let total: f64 = min_d2.iter().sum();
        let next = if total > 0.0 {
            let weights = WeightedIndex::new(&min_d2).expect("positive total weight");
            weights.sample(&mut rng)
        } else {
            let remaining: Vec<usize> = (0..n).filter(|r| !rows.contains(r)).collect();
            remaining[rng.random_range(0..remaining.len())]
        };
        rows.push(next);
        for (dist, x) in min_d2.iter_mut().zip(ds.rows()) {
            let d = dist2(x, ds.row(next));
            if d < *dist {
                *dist = d;
            }
        }
    }
    CenterSet::from_rows(ds, &rows)
}

/// Draws initial centers according to `cfg.init` and `cfg.seed`.
pub fn init_centers(ds: &Dataset, k: usize, cfg: LloydConfig) -> Result<CenterSet> {
    match cfg.init {
        InitMethod::RandomPoints => init_random(ds, k, cfg.seed),
        InitMethod::KMeansPlusPlus => init_kmeanspp(ds, k, cfg.seed),
    }
}

/// Alternates assignment and centroid steps from the given centers until no
/// label changes, or `cfg.max_iterations` is reached.
pub fn lloyd_run(ds: &Dataset, init: &CenterSet, cfg: LloydConfig) -> Result<ClusteringResult> {
    lloyd_run_detailed(ds, init, cfg).map(|(result, _)| result)
}

/// As [`lloyd_run`], additionally returning J after every full
/// assign-then-centroid step. The sequence is non-increasing.
pub fn lloyd_run_detailed(
    ds: &Dataset,
    init: &CenterSet,
    cfg: LloydConfig,
) -> Result<(ClusteringResult, Vec<f64>)> {
    if cfg.max_iterations == 0 {
        return Err(Error::InvalidConfig("max_iterations must be >= 1"));
    }
    let mut centers = init.clone();
    let mut assignment = assign(ds, &centers)?;
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        iterations += 1;
        centers = centroids(ds, &assignment, &centers);
        let next = assign(ds, &centers)?;
        history.push(icss(ds, &centers, &next)?);
        let changed = next.labels() != assignment.labels();
        assignment = next;
        if !changed {
            converged = true;
            break;
        }
    }
    let j = icss(ds, &centers, &assignment)?;
    Ok((
        ClusteringResult {
            centers,
            assignment,
            j,
            iterations,
            converged,
        },
        history,
    ))
}

/// Initializes per `cfg` and runs Lloyd's algorithm to convergence.
pub fn kmeans(ds: &Dataset, k: usize, cfg: LloydConfig) -> Result<ClusteringResult> {
    let init = init_centers(ds, k, cfg)?;
    lloyd_run(ds, &init, cfg)
}
