use alloc::string::String;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Task};
use super::metrics::{accuracy, binary_macro_f1, rmse};
use super::{PredictError, RandomForest};
use crate::rng;
use crate::stats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportanceMetric {
    Rmse,
    Accuracy,
    MacroF1,
}

impl ImportanceMetric {
    pub fn default_for(task: Task) -> Self {
        match task {
            Task::Polarity => ImportanceMetric::Rmse,
            Task::Presence => ImportanceMetric::Accuracy,
        }
    }

    fn score(self, predicted: &[f64], actual: &[f64]) -> f64 {
        match self {
            ImportanceMetric::Rmse => rmse(predicted, actual),
            ImportanceMetric::Accuracy => accuracy(predicted, actual),
            ImportanceMetric::MacroF1 => binary_macro_f1(predicted, actual),
        }
    }

    /// Positive when `permuted` is worse than `base`.
    fn degradation(self, base: f64, permuted: f64) -> f64 {
        match self {
            ImportanceMetric::Rmse => permuted - base,
            _ => base - permuted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureImportance {
    pub feature: String,
    pub mean: f64,
    pub std_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub metric: ImportanceMetric,
    pub repetitions: usize,
    pub seed: u64,
    pub base_score: f64,
    /// In feature order.
    pub features: Vec<FeatureImportance>,
}

impl ImportanceReport {
    /// Feature indices from most to least important; ties keep feature order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.features.len()).collect();
        idx.sort_by(|&a, &b| self.features[b].mean.total_cmp(&self.features[a].mean));
        idx
    }
}

/// Evaluation rows in row-major form, shared across permutations.
pub struct PermutationContext<'a> {
    model: &'a RandomForest,
    metric: ImportanceMetric,
    n_features: usize,
    matrix: Vec<f64>,
    actual: Vec<f64>,
    base_score: f64,
}

impl<'a> PermutationContext<'a> {
    pub fn new(
        model: &'a RandomForest,
        dataset: &Dataset,
        rows: &[usize],
        metric: ImportanceMetric,
    ) -> Result<Self, PredictError> {
        model.check_compatible(dataset)?;
        if rows.is_empty() {
            return Err(PredictError::EmptyEvaluation);
        }
        let n_features = dataset.n_features();
        let mut matrix = Vec::with_capacity(rows.len() * n_features);
        for &i in rows {
            matrix.extend(dataset.columns.iter().map(|c| c[i]));
        }
        let actual: Vec<f64> = rows.iter().map(|&i| dataset.target[i]).collect();
        let predicted: Vec<f64> = matrix.chunks(n_features).map(|r| model.predict_row(r)).collect();
        let base_score = metric.score(&predicted, &actual);
        Ok(Self { model, metric, n_features, matrix, actual, base_score })
    }

    pub fn base_score(&self) -> f64 {
        self.base_score
    }
}

/// Importance of one feature; each repetition uses its own derived stream, so
/// features can be evaluated in any order or in parallel.
pub fn permutation_importance_feature(
    ctx: &PermutationContext<'_>,
    feature: usize,
    repetitions: usize,
    seed: u64,
) -> FeatureImportance {
    let n = ctx.actual.len();
    let original: Vec<f64> = (0..n).map(|r| ctx.matrix[r * ctx.n_features + feature]).collect();
    let mut row = alloc::vec![0.0; ctx.n_features];
    let mut predicted = alloc::vec![0.0; n];
    let mut column = original.clone();
    let mut degradations = Vec::with_capacity(repetitions);
    for rep in 0..repetitions {
        column.copy_from_slice(&original);
        let index = ((feature as u64) << 32) | rep as u64;
        column.shuffle(&mut rng::stream(seed, "permute", index));
        for r in 0..n {
            row.copy_from_slice(&ctx.matrix[r * ctx.n_features..(r + 1) * ctx.n_features]);
            row[feature] = column[r];
            predicted[r] = ctx.model.predict_row(&row);
        }
        let score = ctx.metric.score(&predicted, &ctx.actual);
        degradations.push(ctx.metric.degradation(ctx.base_score, score));
    }
    FeatureImportance {
        feature: ctx.model.feature_names[feature].clone(),
        mean: stats::mean(&degradations).unwrap_or(0.0),
        std_dev: stats::std_dev(&degradations),
    }
}

/// Shuffle each feature column `repetitions` times and record the mean loss in score.
pub fn permutation_importance(
    model: &RandomForest,
    dataset: &Dataset,
    rows: &[usize],
    metric: ImportanceMetric,
    repetitions: usize,
    seed: u64,
) -> Result<ImportanceReport, PredictError> {
    let ctx = PermutationContext::new(model, dataset, rows, metric)?;
    let features = (0..ctx.n_features).map(|f| permutation_importance_feature(&ctx, f, repetitions, seed)).collect();
    Ok(ImportanceReport { metric, repetitions, seed, base_score: ctx.base_score, features })
}
