//! Benchmark harness around `qmts-core`: CSV loading, a named dataset
//! registry, repeated seeded experiment runs, and report emission as JSON,
//! CSV or a markdown table. The `cluster` binary is a thin wrapper over
//! these modules.

pub mod bench;
pub mod loader;
pub mod registry;
pub mod report;

pub use bench::{
    aggregate, run_experiment, Algorithm, AlgorithmSummary, BenchError, ExperimentSpec, RunRecord,
    RunReport,
};
pub use loader::{load_csv, write_csv, CsvOptions, LoadError};
pub use registry::{Registry, RegistryEntry, RegistryError, REGISTRY_ENV_VAR};
pub use report::{emit_report, ReportFormat};
