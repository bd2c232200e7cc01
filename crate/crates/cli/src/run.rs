use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use relclust::eval::{adjusted_rand, cut, homogeneity_completeness, nmi, outlier_scores};
use relclust::mst::mst_reliable;
use relclust::strategy::cluster;
use relclust::{Criterion, Dataset, Dendrogram, FlatPartition, Metric, Strategy, StrategyConfig};

use crate::error::{CliError, Result};
use crate::io;
use crate::output::{self, Metrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    PointsCsv,
    DissimCsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    LinkageCsv,
    EventsJson,
    Dot,
    MetricsJson,
    MstCsv,
    OutlierCsv,
}

impl Output {
    pub const ALL: [Output; 6] = [
        Output::LinkageCsv,
        Output::EventsJson,
        Output::Dot,
        Output::MetricsJson,
        Output::MstCsv,
        Output::OutlierCsv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::LinkageCsv => "linkage",
            Output::EventsJson => "events",
            Output::Dot => "dot",
            Output::MetricsJson => "metrics",
            Output::MstCsv => "mst",
            Output::OutlierCsv => "outliers",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Output::LinkageCsv => "linkage.csv",
            Output::EventsJson => "events.json",
            Output::Dot => "dendrogram.dot",
            Output::MetricsJson => "metrics.json",
            Output::MstCsv => "mst.csv",
            Output::OutlierCsv => "outliers.csv",
        }
    }
}

impl FromStr for Output {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Output::ALL
            .into_iter()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = Output::ALL.iter().map(|o| o.name()).collect();
                CliError::InvalidInput(format!("unknown output `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub input_kind: InputKind,
    pub metric: Metric,
    pub criterion: Criterion,
    pub strategy: Strategy,
    /// Clusters for the metrics cut; defaults to the number of true classes.
    pub k: Option<usize>,
    pub labels_path: Option<PathBuf>,
    pub outputs: BTreeSet<Output>,
    pub out_dir: PathBuf,
    pub max_level: Option<usize>,
}

impl RunConfig {
    pub fn new(input_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            input_path: input_path.into(),
            input_kind: InputKind::PointsCsv,
            metric: Metric::SquaredEuclidean,
            criterion: Criterion::Single,
            strategy: Strategy::Reliable,
            k: None,
            labels_path: None,
            outputs: BTreeSet::from([Output::LinkageCsv]),
            out_dir: PathBuf::from("."),
            max_level: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.outputs.contains(&Output::MetricsJson) && self.labels_path.is_none() {
            return Err(CliError::InvalidInput("metrics output requires --labels".into()));
        }
        if self.max_level.is_some()
            && self
                .outputs
                .iter()
                .any(|o| matches!(o, Output::MetricsJson | Output::OutlierCsv))
        {
            return Err(CliError::InvalidInput(
                "metrics and outlier outputs need a complete dendrogram; drop --max-level".into(),
            ));
        }
        Ok(())
    }

    fn strategy_config(&self) -> StrategyConfig {
        StrategyConfig {
            strategy: self.strategy,
            criterion: self.criterion,
            metric: self.metric,
            max_level: self.max_level,
        }
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub dendrogram: Dendrogram,
    pub metrics: Option<Metrics>,
    pub written: Vec<PathBuf>,
}

pub fn load_dataset(config: &RunConfig) -> Result<Dataset> {
    match config.input_kind {
        InputKind::PointsCsv => io::load_points_csv(&config.input_path),
        InputKind::DissimCsv => io::load_dissimilarity_csv(&config.input_path),
    }
}

/// Cuts into `k` clusters (default: the number of classes) and scores the cut.
pub fn evaluate(
    dendrogram: &Dendrogram,
    truth: &FlatPartition,
    k: Option<usize>,
    criterion: Criterion,
    strategy: Strategy,
) -> Result<Metrics> {
    if truth.n() != dendrogram.n() {
        return Err(CliError::InvalidInput(format!(
            "labels cover {} objects but the dataset has {}",
            truth.n(),
            dendrogram.n()
        )));
    }
    let k = k.unwrap_or(truth.k());
    let pred = cut(dendrogram, k)?;
    Ok(Metrics::new(
        nmi(truth, &pred)?,
        adjusted_rand(truth, &pred)?,
        homogeneity_completeness(truth, &pred)?,
        k,
        criterion.name(),
        strategy.name(),
    ))
}

fn write(dir: &Path, output: Output, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(output.file_name());
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    written.push(path);
    Ok(())
}

/// Loads the input, clusters it and writes the requested outputs.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let dataset = load_dataset(config)?;
    let truth = match &config.labels_path {
        Some(path) => Some(io::load_labels_csv(path)?),
        None => None,
    };
    if let Some(truth) = &truth {
        if truth.n() != dataset.n() {
            return Err(CliError::InvalidInput(format!(
                "labels cover {} objects but the dataset has {}",
                truth.n(),
                dataset.n()
            )));
        }
    }
    if let Some(k) = config.k {
        if k == 0 || k > dataset.n() {
            return Err(CliError::InvalidInput(format!("k must lie in [1, {}], got {k}", dataset.n())));
        }
    }
    let dendrogram = cluster(&dataset, &config.strategy_config())?;
    let metrics = match &truth {
        Some(truth) if dendrogram.is_complete() => Some(evaluate(
            &dendrogram,
            truth,
            config.k,
            config.criterion,
            config.strategy,
        )?),
        _ => None,
    };

    fs::create_dir_all(&config.out_dir).map_err(|e| CliError::io(&config.out_dir, e))?;
    let mut written = Vec::new();
    for &out in &config.outputs {
        let contents = match out {
            Output::LinkageCsv => output::linkage_csv(&dendrogram),
            Output::EventsJson => output::events_json(&dendrogram)?,
            Output::Dot => output::dot(&dendrogram),
            Output::MetricsJson => match &metrics {
                Some(m) => output::metrics_json(m)?,
                None => return Err(CliError::InvalidInput("metrics output requires --labels".into())),
            },
            Output::MstCsv => output::mst_csv(&mst_reliable(&dataset, config.metric)?),
            Output::OutlierCsv => output::outlier_csv(&dendrogram, &outlier_scores(&dendrogram)?),
        };
        write(&config.out_dir, out, &contents, &mut written)?;
    }
    Ok(RunSummary {
        dendrogram,
        metrics,
        written,
    })
}
