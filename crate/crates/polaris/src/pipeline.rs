//! End-to-end run: ingest, labels, polarity, networks, dynamics, features and
//! both prediction tasks, written into one artefact directory.

use std::path::{Path, PathBuf};

use polaris_core::dynamics::RetentionRule;
use polaris_core::polarity::PolarityOptions;
use polaris_core::predict::Task;
use polaris_core::stance::{merge_labels, LabelSource, MergeReport, SourceKind};
use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::modeling::{run_task, PredictConfig, TaskReport};
use crate::output::write_json;
use crate::{jsonl, labels, periods, report, store};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub periods: PathBuf,
    pub gold: Option<PathBuf>,
    pub predicted: Option<PathBuf>,
    pub polarity: PolarityOptions,
    pub density_bucket: i64,
    pub polarity_bins: usize,
    pub activity_bins: usize,
    pub degree_bins: usize,
    pub prolific_percentile: f64,
    pub retention: RetentionRule,
    pub predict: PredictConfig,
    /// Also write the binary corpus store.
    pub write_store: bool,
}

impl PipelineConfig {
    pub fn new(input: PathBuf, periods: PathBuf) -> Self {
        let mut predict = PredictConfig::default();
        predict.forest.n_trees = 50;
        Self {
            input,
            periods,
            gold: None,
            predicted: None,
            polarity: PolarityOptions::default(),
            density_bucket: 86_400,
            polarity_bins: 40,
            activity_bins: 20,
            degree_bins: 20,
            prolific_percentile: 0.99,
            retention: RetentionRule::NextPeriod,
            predict,
            write_store: false,
        }
    }
}

#[derive(Serialize)]
pub struct RunSummary {
    pub config: PipelineConfig,
    pub submissions: usize,
    pub users: usize,
    pub user_periods: usize,
    pub labels: Option<MergeReport>,
    pub edges: usize,
    pub triangles: u64,
    pub fraction_like_minded: f64,
    pub single_period_fraction: f64,
    pub presence: TaskReport,
    pub polarity: TaskReport,
    pub artefacts: Vec<String>,
}

pub fn label_sources(gold: Option<&Path>, predicted: Option<&Path>) -> Result<Vec<LabelSource>> {
    let mut sources = Vec::new();
    if let Some(p) = gold {
        sources.push(labels::read_label_source(p, SourceKind::Gold)?);
    }
    if let Some(p) = predicted {
        sources.push(labels::read_label_source(p, SourceKind::Predicted)?);
    }
    Ok(sources)
}

pub fn run(config: &PipelineConfig, out: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(out).map_err(|e| Error::io("pipeline", out, e))?;
    let mut artefacts: Vec<String> = Vec::new();
    let mut path = |name: &str| {
        artefacts.push(name.to_string());
        out.join(name)
    };

    let schedule = periods::load_periods(&config.periods)?;
    let corpus = jsonl::read_corpus(&config.input)?.assign_periods(schedule);
    let sources = label_sources(config.gold.as_deref(), config.predicted.as_deref())?;
    let (corpus, merge) = if sources.is_empty() {
        (corpus, None)
    } else {
        let (c, r) = merge_labels(corpus, &sources)?;
        (c, Some(r))
    };
    if config.write_store {
        store::write_store(&path("corpus.plrs"), &corpus)?;
    }
    write_json(&path("ingest.json"), &report::ingest_summary(&corpus))?;
    report::write_density(&path("density.csv"), &corpus, config.density_bucket)?;

    let a = Analysis::new(corpus, config.polarity);
    report::write_stats(&path("polarity.csv"), &a)?;
    write_json(&path("polarity_distribution.json"), &report::distribution(&a, config.polarity_bins))?;

    let views = a.views();
    report::write_edges(&path("edges.csv"), &a)?;
    report::write_node_metrics(&path("network_stats.csv"), &a, &views)?;
    let (echo, echo_all) = report::echo(&a, &views);
    write_json(&path("echo.json"), &echo)?;
    report::write_echo_cdf(&path("echo_cdf.csv"), &echo_all)?;
    drop(views);
    let census = report::triads(&a);
    report::write_triads(&path("triads.csv"), &census)?;

    let patterns = report::patterns(&a);
    report::write_patterns(&path("patterns.csv"), &patterns)?;
    let heat = report::retention(&a, config.activity_bins, config.degree_bins, config.retention);
    report::write_retention(&path("retention.csv"), &heat)?;
    write_json(&path("prolific.json"), &report::prolific(&a, config.prolific_percentile, config.retention))?;

    let features = a.features(None);
    report::write_features(&path("features.csv"), &a.corpus, &features)?;
    let matrix = a.matrix();
    let presence = run_task(&features, &a.stats, &matrix, Task::Presence, &config.predict)?;
    write_json(&path("predict_presence.json"), &presence)?;
    let polarity = run_task(&features, &a.stats, &matrix, Task::Polarity, &config.predict)?;
    write_json(&path("predict_polarity.json"), &polarity)?;

    artefacts.push("run.json".to_string());
    let summary = RunSummary {
        config: config.clone(),
        submissions: a.corpus.len(),
        users: a.corpus.users().len(),
        user_periods: a.stats.len(),
        labels: merge,
        edges: a.graphs.iter().map(|g| g.n_edges()).sum(),
        triangles: census.iter().map(|c| c.total()).sum(),
        fraction_like_minded: echo.fraction_like_minded,
        single_period_fraction: patterns.single_period_fraction,
        presence,
        polarity,
        artefacts,
    };
    write_json(&out.join("run.json"), &summary)?;
    Ok(summary)
}
