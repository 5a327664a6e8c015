//! Black-box tests of the `cluster` binary: argument handling, registry
//! resolution, file datasets, output formats and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qmts_cli::bench::RunReport;

fn repo_registry() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../datasets/registry.toml")
}

fn cluster(args: &[&str], registry: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cluster"));
    cmd.args(args);
    match registry {
        Some(path) => cmd.env("CLUSTER_REGISTRY", path),
        None => cmd.env_remove("CLUSTER_REGISTRY"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn registry_dataset_runs_and_prints_a_markdown_table() {
    let out = cluster(
        &["run", "--data", "iris", "--reps", "3", "--itmax", "40"],
        Some(&repo_registry()),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("## iris (k=3, 3 repetitions"));
    assert!(text.contains("| lloyd-random |"));
    assert!(text.contains("| lloyd-kmeanspp |"));
    assert!(text.contains("| qmts |"));
}

#[test]
fn json_report_is_written_to_the_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = cluster(
        &[
            "run",
            "--data",
            "iris",
            "--algo",
            "qmts",
            "--reps",
            "2",
            "--itmax",
            "40",
            "--format",
            "json",
            "--out",
            out_path.to_str().unwrap(),
        ],
        Some(&repo_registry()),
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).is_empty());

    let report: RunReport =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report.dataset, "iris");
    assert_eq!(report.k, 3);
    assert_eq!(report.records.len(), 2);
    assert_eq!(report.aggregates.len(), 1);
}

#[test]
fn file_dataset_with_loader_flags() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("points.csv");
    std::fs::write(&data, "a;1.0;2.0\nb;1.5;2.5\nc;9.0;9.5\nd;9.2;9.9\n").unwrap();

    let out = cluster(
        &[
            "run",
            "--data",
            data.to_str().unwrap(),
            "--k",
            "2",
            "--algo",
            "lloyd-random",
            "--reps",
            "2",
            "--no-header",
            "--delimiter",
            ";",
            "--label-col",
            "0",
            "--format",
            "csv",
        ],
        None,
    );
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("algorithm,repetition,seed,j,iterations,time_seconds"));
    assert!(text.contains("\nlloyd-random,0,0,"));
}

#[test]
fn repeated_invocations_report_identical_j_values() {
    let run = || {
        let out = cluster(
            &[
                "run", "--data", "glass", "--algo", "qmts", "--reps", "3", "--itmax", "60",
                "--seed", "7", "--format", "json",
            ],
            Some(&repo_registry()),
        );
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        let report: RunReport = serde_json::from_str(&stdout(&out)).unwrap();
        report.records.iter().map(|r| r.j).collect::<Vec<f64>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn normalization_flag_changes_the_objective_scale() {
    let json_best = |normalize: &str| {
        let out = cluster(
            &[
                "run", "--data", "iris", "--algo", "lloyd-random", "--reps", "2", "--normalize",
                normalize, "--format", "json",
            ],
            Some(&repo_registry()),
        );
        assert!(out.status.success(), "stderr: {}", stderr(&out));
        let report: RunReport = serde_json::from_str(&stdout(&out)).unwrap();
        report.aggregates[0].best_j
    };
    let raw = json_best("none");
    let scaled = json_best("minmax");
    assert!(scaled < raw, "min-max scaling should shrink J: {scaled} vs {raw}");
}

#[test]
fn unknown_dataset_fails_with_a_helpful_message() {
    let out = cluster(&["run", "--data", "nope"], Some(&repo_registry()));
    assert!(!out.status.success());
    let text = stderr(&out);
    assert!(text.contains("error:"), "stderr: {text}");
    assert!(text.contains("iris"), "should list available names: {text}");
}

#[test]
fn file_dataset_without_k_fails() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("points.csv");
    std::fs::write(&data, "x,y\n1.0,2.0\n2.0,3.0\n").unwrap();
    let out = cluster(&["run", "--data", data.to_str().unwrap()], None);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--k"));
}

#[test]
fn invalid_flag_values_fail_cleanly() {
    let registry = repo_registry();
    for (args, needle) in [
        (vec!["run", "--data", "iris", "--algo", "dbscan"], "dbscan"),
        (vec!["run", "--data", "iris", "--format", "yaml"], "yaml"),
        (vec!["run", "--data", "iris", "--refine", "swap"], "swap"),
        (
            vec!["run", "--data", "iris", "--rmax-frac", "1.5"],
            "rmax-frac",
        ),
        (
            vec!["run", "--data", "iris", "--normalize", "robust"],
            "robust",
        ),
    ] {
        let out = cluster(&args, Some(&registry));
        assert!(!out.status.success(), "args {args:?} should fail");
        assert!(
            stderr(&out).contains(needle),
            "args {args:?}: stderr {} lacks {needle:?}",
            stderr(&out)
        );
    }
}

#[test]
fn malformed_csv_reports_the_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    std::fs::write(&data, "x,y\n1.0,2.0\n3.0,oops\n").unwrap();
    let out = cluster(
        &["run", "--data", data.to_str().unwrap(), "--k", "1"],
        None,
    );
    assert!(!out.status.success());
    let text = stderr(&out);
    assert!(text.contains(":3:"), "missing line number: {text}");
    assert!(text.contains("oops"), "missing field value: {text}");
}
