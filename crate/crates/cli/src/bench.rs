//! Repeated seeded clustering runs and their aggregation.
//!
//! Repetition `i` of every algorithm runs with seed `base_seed + i`, so a
//! report is reproducible from its spec alone; wall times are the only
//! fields that vary between invocations.

use std::time::Instant;

use qmts_core::lloyd::{kmeans, InitMethod, LloydConfig};
use qmts_core::qmts::{qmts_run, QmtsConfig};
use qmts_core::Dataset;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown algorithm {name:?} (expected lloyd-random, lloyd-kmeanspp or qmts)")]
    UnknownAlgorithm { name: String },
    #[error("invalid experiment: {0}")]
    InvalidSpec(&'static str),
    #[error(transparent)]
    Core(#[from] qmts_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Lloyd's K-Means from uniformly random rows.
    LloydRandom,
    /// Lloyd's K-Means from D²-weighted seeding.
    LloydKmeanspp,
    /// Tabu search over quantized means with refinement.
    Qmts,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::LloydRandom,
        Algorithm::LloydKmeanspp,
        Algorithm::Qmts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LloydRandom => "lloyd-random",
            Algorithm::LloydKmeanspp => "lloyd-kmeanspp",
            Algorithm::Qmts => "qmts",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lloyd-random" => Ok(Algorithm::LloydRandom),
            "lloyd-kmeanspp" => Ok(Algorithm::LloydKmeanspp),
            "qmts" => Ok(Algorithm::Qmts),
            _ => Err(BenchError::UnknownAlgorithm {
                name: s.to_string(),
            }),
        }
    }
}

/// Everything needed to reproduce one benchmark invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub dataset: String,
    pub k: usize,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub lloyd: LloydConfig,
    pub qmts: QmtsConfig,
}

impl ExperimentSpec {
    pub fn new(dataset: impl Into<String>, k: usize) -> Self {
        Self {
            dataset: dataset.into(),
            k,
            algorithms: Algorithm::ALL.to_vec(),
            repetitions: 100,
            base_seed: 0,
            lloyd: LloydConfig::default(),
            qmts: QmtsConfig::default(),
        }
    }
}

/// One algorithm invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub repetition: usize,
    pub seed: u64,
    pub j: f64,
    pub iterations: usize,
    pub time_seconds: f64,
}

/// Worst/average/best J and mean time over one algorithm's repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub repetitions: usize,
    pub worst_j: f64,
    pub average_j: f64,
    pub best_j: f64,
    pub mean_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub k: usize,
    pub repetitions: usize,
    pub base_seed: u64,
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<AlgorithmSummary>,
}

impl RunReport {
    /// Copy with every wall-time field zeroed, for comparing reports whose
    /// deterministic content should match.
    pub fn with_zeroed_timings(&self) -> RunReport {
        let mut copy = self.clone();
        for record in &mut copy.records {
            record.time_seconds = 0.0;
        }
        for summary in &mut copy.aggregates {
            summary.mean_time_seconds = 0.0;
        }
        copy
    }
}

/// Folds per-repetition records into per-algorithm summaries, in the order
/// algorithms first appear. The mean is clamped into [best, worst] so the
/// worst ≥ average ≥ best invariant survives float rounding.
pub fn aggregate(records: &[RunRecord]) -> Vec<AlgorithmSummary> {
    let mut order: Vec<Algorithm> = Vec::new();
    for record in records {
        if !order.contains(&record.algorithm) {
            order.push(record.algorithm);
        }
    }
    order
        .into_iter()
        .map(|algorithm| {
            let mut n = 0usize;
            let mut worst = f64::NEG_INFINITY;
            let mut best = f64::INFINITY;
            let mut sum_j = 0.0;
            let mut sum_time = 0.0;
            for record in records.iter().filter(|r| r.algorithm == algorithm) {
                n += 1;
                worst = worst.max(record.j);
                best = best.min(record.j);
                sum_j += record.j;
                sum_time += record.time_seconds;
            }
            AlgorithmSummary {
                algorithm,
                repetitions: n,
                worst_j: worst,
                average_j: (sum_j / n as f64).clamp(best, worst),
                best_j: best,
                mean_time_seconds: sum_time / n as f64,
            }
        })
        .collect()
}

/// Runs every algorithm in the spec `repetitions` times against `ds` and
/// aggregates the results. Only the algorithm call itself is timed.
pub fn run_experiment(ds: &Dataset, spec: &ExperimentSpec) -> Result<RunReport, BenchError> {
    if spec.repetitions == 0 {
        return Err(BenchError::InvalidSpec("repetitions must be >= 1"));
    }
    spec.qmts.validate()?;

    let mut records = Vec::with_capacity(spec.algorithms.len() * spec.repetitions);
    for &algorithm in &spec.algorithms {
        for repetition in 0..spec.repetitions {
            let seed = spec.base_seed.wrapping_add(repetition as u64);
            let start = Instant::now();
            let (j, iterations) = match algorithm {
                Algorithm::LloydRandom => {
                    let cfg = LloydConfig {
                        seed,
                        init: InitMethod::RandomPoints,
                        ..spec.lloyd
                    };
                    let result = kmeans(ds, spec.k, cfg)?;
                    (result.j, result.iterations)
                }
                Algorithm::LloydKmeanspp => {
                    let cfg = LloydConfig {
                        seed,
                        init: InitMethod::KMeansPlusPlus,
                        ..spec.lloyd
                    };
                    let result = kmeans(ds, spec.k, cfg)?;
                    (result.j, result.iterations)
                }
                Algorithm::Qmts => {
                    let cfg = QmtsConfig { seed, ..spec.qmts };
                    let result = qmts_run(ds, spec.k, cfg)?;
                    (result.j, result.iterations)
                }
            };
            // coarse clocks can report zero for sub-tick runs; keep times
            // strictly positive
            let time_seconds = start.elapsed().as_secs_f64().max(1e-9);
            records.push(RunRecord {
                algorithm,
                repetition,
                seed,
                j,
                iterations,
                time_seconds,
            });
        }
    }
    let aggregates = aggregate(&records);
    Ok(RunReport {
        dataset: spec.dataset.clone(),
        k: spec.k,
        repetitions: spec.repetitions,
        base_seed: spec.base_seed,
        records,
        aggregates,
    })
}
