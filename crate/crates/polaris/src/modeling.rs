//! Parallel training and reporting around the core prediction harness.

use polaris_core::dynamics::PresenceMatrix;
use polaris_core::features::FeatureTable;
use polaris_core::polarity::UserPeriodStats;
use polaris_core::predict::{
    build_dataset, evaluate, grouped_split, permutation_importance_feature, random_baselines, Baseline, Dataset,
    ForestConfig, ImportanceMetric, ImportanceReport, Metrics, PermutationContext, Prepared, RandomForest, Split,
    Task,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Trees are grown in parallel from independent streams; the result equals
/// sequential training.
pub fn train(dataset: &Dataset, rows: &[usize], config: &ForestConfig) -> Result<RandomForest> {
    let prepared = Prepared::new(dataset, rows, config)?;
    let trees = (0..config.n_trees).into_par_iter().map(|k| prepared.train_tree(k)).collect();
    Ok(prepared.into_forest(trees))
}

/// Features are permuted in parallel; each repetition has its own stream.
pub fn importance(
    model: &RandomForest,
    dataset: &Dataset,
    rows: &[usize],
    metric: ImportanceMetric,
    repetitions: usize,
    seed: u64,
) -> Result<ImportanceReport> {
    let ctx = PermutationContext::new(model, dataset, rows, metric)?;
    let features = (0..dataset.n_features())
        .into_par_iter()
        .map(|f| permutation_importance_feature(&ctx, f, repetitions, seed))
        .collect();
    Ok(ImportanceReport { metric, repetitions, seed, base_score: ctx.base_score(), features })
}

/// Every `k`-th row so that at most `max_rows` remain.
pub fn thin(rows: &[usize], max_rows: usize) -> Vec<usize> {
    if max_rows == 0 || rows.len() <= max_rows {
        return rows.to_vec();
    }
    let step = rows.len().div_ceil(max_rows);
    rows.iter().step_by(step).copied().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictConfig {
    pub forest: ForestConfig,
    pub test_fraction: f64,
    pub split_seed: u64,
    pub importance_repetitions: usize,
    /// Cap on test rows used for permutation importance; 0 means all.
    pub importance_max_rows: usize,
}

impl Default for PredictConfig {
    fn default() -> Self {
        Self {
            forest: ForestConfig::default(),
            test_fraction: 0.2,
            split_seed: 0,
            importance_repetitions: 5,
            importance_max_rows: 20_000,
        }
    }
}

/// A trained model together with how its split was drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub test_fraction: f64,
    pub split_seed: u64,
    pub model: RandomForest,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaskReport {
    pub task: Task,
    pub n_rows: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// Set when the task could not run, e.g. too few rows.
    pub skipped: Option<String>,
    pub constant_target: bool,
    pub metrics: Option<Metrics>,
    pub baselines: Vec<Baseline>,
    pub importance: Option<ImportanceReport>,
}

pub fn split(dataset: &Dataset, config: &PredictConfig) -> Split {
    grouped_split(dataset, config.test_fraction, config.split_seed)
}

pub fn run_task(
    features: &FeatureTable,
    stats: &[UserPeriodStats],
    matrix: &PresenceMatrix,
    task: Task,
    config: &PredictConfig,
) -> Result<TaskReport> {
    let dataset = build_dataset(features, stats, matrix, task);
    let split = split(&dataset, config);
    let mut report = TaskReport {
        task,
        n_rows: dataset.n_rows(),
        n_train: split.train.len(),
        n_test: split.test.len(),
        skipped: None,
        constant_target: false,
        metrics: None,
        baselines: Vec::new(),
        importance: None,
    };
    if split.train.len() < 2 || split.test.is_empty() {
        report.skipped = Some(format!(
            "need at least 2 training rows and 1 test row, have {} and {}",
            split.train.len(),
            split.test.len()
        ));
        return Ok(report);
    }
    let model = train(&dataset, &split.train, &config.forest)?;
    report.constant_target = model.constant_target;
    report.metrics = Some(evaluate(&model, &dataset, &split.test)?);
    report.baselines = random_baselines(&dataset, &split, config.split_seed)?;
    if config.importance_repetitions > 0 {
        let rows = thin(&split.test, config.importance_max_rows);
        report.importance = Some(importance(
            &model,
            &dataset,
            &rows,
            ImportanceMetric::default_for(task),
            config.importance_repetitions,
            config.forest.seed,
        )?);
    }
    Ok(report)
}
