use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use relclust::{Criterion, Metric, Strategy};
use relclust_cli::{run, CliError, InputKind, Output, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Standard,
    Reliable,
    Alpha,
}

/// Standard and reliable agglomerative hierarchical clustering.
#[derive(Debug, Parser)]
#[command(name = "relclust", version)]
struct Args {
    /// CSV with one row per object (coordinates, or a dissimilarity row with --dissimilarity).
    #[arg(long)]
    input: PathBuf,

    /// Treat the input as a full n x n dissimilarity matrix.
    #[arg(long)]
    dissimilarity: bool,

    /// sqeuclidean or euclidean.
    #[arg(long, default_value = "sqeuclidean")]
    metric: Metric,

    /// single, complete, average, centroid or ward.
    #[arg(long, default_value = "single")]
    criterion: Criterion,

    #[arg(long, value_enum, default_value = "reliable")]
    strategy: StrategyArg,

    /// Fraction of reliable links kept per level; required with --strategy alpha.
    #[arg(long)]
    alpha: Option<f64>,

    /// Number of clusters for the metrics cut (default: number of classes in --labels).
    #[arg(long)]
    k: Option<usize>,

    /// Ground-truth labels, one per line.
    #[arg(long)]
    labels: Option<PathBuf>,

    #[arg(long, default_value = ".")]
    out_dir: PathBuf,

    /// Comma-separated outputs: linkage, events, dot, metrics, mst, outliers.
    #[arg(long, value_delimiter = ',', default_value = "linkage")]
    emit: Vec<Output>,

    /// Stop after this many levels.
    #[arg(long)]
    max_level: Option<usize>,
}

fn config(args: Args) -> Result<RunConfig, CliError> {
    let strategy = match (args.strategy, args.alpha) {
        (StrategyArg::Alpha, Some(a)) => Strategy::Alpha(a),
        (StrategyArg::Alpha, None) => return Err(CliError::InvalidInput("--strategy alpha requires --alpha".into())),
        (_, Some(_)) => return Err(CliError::InvalidInput("--alpha is only valid with --strategy alpha".into())),
        (StrategyArg::Standard, None) => Strategy::Standard,
        (StrategyArg::Reliable, None) => Strategy::Reliable,
    };
    Ok(RunConfig {
        input_path: args.input,
        input_kind: if args.dissimilarity {
            InputKind::DissimCsv
        } else {
            InputKind::PointsCsv
        },
        metric: args.metric,
        criterion: args.criterion,
        strategy,
        k: args.k,
        labels_path: args.labels,
        outputs: args.emit.into_iter().collect::<BTreeSet<_>>(),
        out_dir: args.out_dir,
        max_level: args.max_level,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = config(args).and_then(|cfg| run(&cfg));
    match result {
        Ok(summary) => {
            let d = &summary.dendrogram;
            println!("objects={} levels={} linkages={}", d.n(), d.levels(), d.records().len());
            if let Some(m) = &summary.metrics {
                println!("k={} nmi={:.4} ari={:.4} v_measure={:.4}", m.k, m.nmi, m.ari, m.v_measure);
            }
            for path in &summary.written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("relclust: {e}");
            ExitCode::FAILURE
        }
    }
}
