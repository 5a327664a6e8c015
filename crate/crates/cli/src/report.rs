//! Report emission: lossless JSON, two-section CSV, or a markdown table
//! with one row per algorithm.

use std::fmt::Write;

use crate::bench::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            _ => Err(format!("unknown format {s:?} (expected json, csv or md)")),
        }
    }
}

/// Renders a report. JSON keeps every field and parses back into an equal
/// [`RunReport`]; CSV lists one row per repetition followed by an aggregate
/// block; markdown shows only the per-algorithm summary table.
pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(report).expect("report contains only plain data");
            out.push('\n');
            out
        }
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    }
}

fn emit_csv(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str("algorithm,repetition,seed,j,iterations,time_seconds\n");
    for r in &report.records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.algorithm, r.repetition, r.seed, r.j, r.iterations, r.time_seconds
        )
        .expect("writing to a string cannot fail");
    }
    out.push('\n');
    out.push_str("algorithm,repetitions,worst_j,average_j,best_j,mean_time_seconds\n");
    for s in &report.aggregates {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.algorithm, s.repetitions, s.worst_j, s.average_j, s.best_j, s.mean_time_seconds
        )
        .expect("writing to a string cannot fail");
    }
    out
}

fn emit_markdown(report: &RunReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "## {} (k={}, {} repetitions, base seed {})",
        report.dataset, report.k, report.repetitions, report.base_seed
    )
    .expect("writing to a string cannot fail");
    out.push('\n');
    out.push_str("| Algorithm | Worst J | Average J | Best J | Mean time (s) |\n");
    out.push_str("|---|---:|---:|---:|---:|\n");
    for s in &report.aggregates {
        writeln!(
            out,
            "| {} | {:.2} | {:.2} | {:.2} | {:.4} |",
            s.algorithm, s.worst_j, s.average_j, s.best_j, s.mean_time_seconds
        )
        .expect("writing to a string cannot fail");
    }
    out
}
