use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Task};
use super::{PredictError, RandomForest, Split};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metrics {
    Regression { n: usize, rmse: f64 },
    Classification { n: usize, accuracy: f64, macro_f1: f64 },
}

impl Metrics {
    pub fn for_task(task: Task, predicted: &[f64], actual: &[f64]) -> Self {
        match task {
            Task::Polarity => Metrics::Regression { n: actual.len(), rmse: rmse(predicted, actual) },
            Task::Presence => Metrics::Classification {
                n: actual.len(),
                accuracy: accuracy(predicted, actual),
                macro_f1: binary_macro_f1(predicted, actual),
            },
        }
    }

    /// RMSE for regression, accuracy for classification.
    pub fn headline(&self) -> f64 {
        match self {
            Metrics::Regression { rmse, .. } => *rmse,
            Metrics::Classification { accuracy, .. } => *accuracy,
        }
    }
}

pub fn rmse(predicted: &[f64], actual: &[f64]) -> f64 {
    assert_eq!(predicted.len(), actual.len());
    if actual.is_empty() {
        return 0.0;
    }
    let sse: f64 = predicted.iter().zip(actual).map(|(p, a)| (p - a) * (p - a)).sum();
    libm::sqrt(sse / actual.len() as f64)
}

pub fn accuracy(predicted: &[f64], actual: &[f64]) -> f64 {
    assert_eq!(predicted.len(), actual.len());
    if actual.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(actual).filter(|(p, a)| (**p > 0.5) == (**a > 0.5)).count();
    hits as f64 / actual.len() as f64
}

/// Mean of the F1 scores of the positive and negative class; a class with no
/// predicted and no actual instances scores 0.
pub fn binary_macro_f1(predicted: &[f64], actual: &[f64]) -> f64 {
    assert_eq!(predicted.len(), actual.len());
    let mut c = [[0u64; 2]; 2];
    for (p, a) in predicted.iter().zip(actual) {
        c[usize::from(*a > 0.5)][usize::from(*p > 0.5)] += 1;
    }
    let f1 = |k: usize| {
        let tp = c[k][k] as f64;
        let denom = 2.0 * tp + c[k][1 - k] as f64 + c[1 - k][k] as f64;
        if denom == 0.0 {
            0.0
        } else {
            2.0 * tp / denom
        }
    };
    (f1(0) + f1(1)) / 2.0
}

/// Score the model on `rows` of `dataset`.
pub fn evaluate(model: &RandomForest, dataset: &Dataset, rows: &[usize]) -> Result<Metrics, PredictError> {
    model.check_compatible(dataset)?;
    if rows.is_empty() {
        return Err(PredictError::EmptyEvaluation);
    }
    let predicted = model.predict(dataset, rows);
    let actual: Vec<f64> = rows.iter().map(|&i| dataset.target[i]).collect();
    Ok(Metrics::for_task(dataset.task, &predicted, &actual))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub name: String,
    pub metrics: Metrics,
}

/// Naive predictors fitted on the training rows and scored on the test rows.
///
/// Regression: `mean` (training mean) and `resample` (a training target drawn
/// at random per test row). Classification: `majority` and `uniform`.
pub fn random_baselines(dataset: &Dataset, split: &Split, seed: u64) -> Result<Vec<Baseline>, PredictError> {
    if split.train.is_empty() {
        return Err(PredictError::TooFewRows(0));
    }
    if split.test.is_empty() {
        return Err(PredictError::EmptyEvaluation);
    }
    let train: Vec<f64> = split.train.iter().map(|&i| dataset.target[i]).collect();
    let actual: Vec<f64> = split.test.iter().map(|&i| dataset.target[i]).collect();
    let mut rng = rng::stream(seed, "baseline", 0);
    let n = actual.len();
    let task = dataset.task;
    let baseline = |name: &str, predicted: Vec<f64>| Baseline {
        name: name.into(),
        metrics: Metrics::for_task(task, &predicted, &actual),
    };
    Ok(match task {
        Task::Polarity => {
            let mean = train.iter().sum::<f64>() / train.len() as f64;
            let draws = (0..n).map(|_| train[rng.random_range(0..train.len())]).collect();
            alloc::vec![baseline("mean", alloc::vec![mean; n]), baseline("resample", draws)]
        }
        Task::Presence => {
            let pos = train.iter().filter(|&&y| y > 0.5).count();
            // ties favour the negative class, as in the forest vote
            let majority = if 2 * pos > train.len() { 1.0 } else { 0.0 };
            let coin = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { 0.0 }).collect();
            alloc::vec![baseline("majority", alloc::vec![majority; n]), baseline("uniform", coin)]
        }
    })
}
