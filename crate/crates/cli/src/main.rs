use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qmts_cli::bench::{run_experiment, Algorithm, ExperimentSpec};
use qmts_cli::loader::{load_csv, CsvOptions};
use qmts_cli::registry::{parse_normalize_mode, Registry};
use qmts_cli::report::{emit_report, ReportFormat};
use qmts_core::dataset::normalize;
use qmts_core::qmts::Refinement;
use qmts_core::{Dataset, NormalizeMode};

#[derive(Parser)]
#[command(
    name = "cluster",
    version,
    about = "Benchmark K-Means optimizers (Lloyd, K-Means++ seeding, quantized-means tabu search)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated seeded clustering benchmarks on one dataset
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Registry dataset name, or path to a CSV file
    #[arg(long)]
    data: String,

    /// Number of clusters; defaults to the registry entry's first k
    #[arg(long)]
    k: Option<usize>,

    /// Comma-separated algorithms: lloyd-random, lloyd-kmeanspp, qmts
    #[arg(long, value_delimiter = ',', default_values_t = [
        "lloyd-random".to_string(), "lloyd-kmeanspp".to_string(), "qmts".to_string()
    ])]
    algo: Vec<String>,

    /// Repetitions per algorithm
    #[arg(long, default_value_t = 100)]
    reps: usize,

    /// Base seed; repetition i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Iteration limit for the tabu search
    #[arg(long = "itmax", default_value_t = 400)]
    itmax: usize,

    /// Non-improvement cut-out as a fraction of itmax
    #[arg(long = "rmax-frac", default_value_t = 0.25)]
    rmax_frac: f64,

    /// Refinement after the tabu search: centroid (one step) or kmeans
    #[arg(long, default_value = "kmeans")]
    refine: String,

    /// Feature scaling: none, zscore or minmax; defaults to the registry
    /// entry's mode, or none for file datasets
    #[arg(long)]
    normalize: Option<String>,

    /// Output format: json, csv or md
    #[arg(long, default_value = "md")]
    format: String,

    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Field delimiter for file datasets
    #[arg(long)]
    delimiter: Option<char>,

    /// Treat the first row of a file dataset as data, not a header
    #[arg(long)]
    no_header: bool,

    /// 0-based index of a label column to exclude from the features of a
    /// file dataset
    #[arg(long)]
    label_col: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// A dataset plus the run parameters its source implies.
struct ResolvedData {
    dataset: Dataset,
    name: String,
    default_k: Option<usize>,
    default_normalize: NormalizeMode,
}

fn resolve_data(args: &RunArgs) -> Result<ResolvedData> {
    // names take priority over paths; a registry entry called "iris" wins
    // over a local file of the same name
    let registry = Registry::load_default();
    if let Ok(ref registry) = registry {
        if registry.contains(&args.data) {
            let entry = registry.get(&args.data)?;
            let dataset = load_csv(&entry.path, entry.options)
                .with_context(|| format!("loading registry dataset {:?}", entry.name))?;
            return Ok(ResolvedData {
                dataset,
                name: entry.name.clone(),
                default_k: Some(entry.default_k()),
                default_normalize: entry.normalize,
            });
        }
    }

    let path = Path::new(&args.data);
    if path.exists() {
        let options = CsvOptions {
            delimiter: args
                .delimiter
                .map(|c| {
                    u8::try_from(c).map_err(|_| anyhow::anyhow!("delimiter must be an ASCII character"))
                })
                .transpose()?
                .unwrap_or(b','),
            has_header: !args.no_header,
            label_column: args.label_col,
        };
        let dataset = load_csv(path, options)?;
        let name = dataset.name().to_string();
        return Ok(ResolvedData {
            dataset,
            name,
            default_k: None,
            default_normalize: NormalizeMode::None,
        });
    }

    match registry {
        Ok(registry) => bail!(
            "{:?} is neither a registry dataset (available: {}) nor an existing file",
            args.data,
            registry.names().collect::<Vec<_>>().join(", ")
        ),
        Err(e) => bail!(
            "{:?} is not an existing file, and the registry could not be read: {e}",
            args.data
        ),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let format: ReportFormat = args.format.parse().map_err(anyhow::Error::msg)?;
    let algorithms: Vec<Algorithm> = args
        .algo
        .iter()
        .map(|name| name.parse())
        .collect::<Result<_, _>>()?;

    let resolved = resolve_data(&args)?;
    let k = args
        .k
        .or(resolved.default_k)
        .context("--k is required for datasets outside the registry")?;

    let mode = match &args.normalize {
        None => resolved.default_normalize,
        Some(value) => parse_normalize_mode(value)
            .with_context(|| format!("unknown normalization {value:?} (use none, zscore or minmax)"))?,
    };
    let (dataset, _) = normalize(&resolved.dataset, mode);

    if !(args.rmax_frac > 0.0 && args.rmax_frac <= 1.0) {
        bail!("--rmax-frac must lie in (0, 1]");
    }
    let r_max = ((args.rmax_frac * args.itmax as f64).round() as usize).clamp(1, args.itmax.max(1));
    let refinement = match args.refine.as_str() {
        "centroid" => Refinement::CentroidStep,
        "kmeans" => Refinement::FullKmeans,
        other => bail!("unknown refinement {other:?} (use centroid or kmeans)"),
    };

    let mut spec = ExperimentSpec::new(resolved.name, k);
    spec.algorithms = algorithms;
    spec.repetitions = args.reps;
    spec.base_seed = args.seed;
    spec.qmts.it_max = args.itmax;
    spec.qmts.r_max = r_max;
    spec.qmts.refinement = refinement;

    let report = run_experiment(&dataset, &spec)?;
    let rendered = emit_report(&report, format);
    match &args.out {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(())
}
