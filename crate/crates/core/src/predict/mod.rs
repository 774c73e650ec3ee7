//! Future-presence classification and future-polarity regression.
//!
//! A [`Dataset`] pairs each (user, period) feature row with an outcome in the
//! following period. Models are random forests of axis-aligned trees grown on
//! pre-binned features; missing values follow the larger side of each split.

mod dataset;
mod forest;
mod importance;
mod metrics;

pub use dataset::{build_dataset, grouped_split, Dataset, Split, Task};
pub use forest::{ForestConfig, Node, Prepared, RandomForest, Tree};
pub use importance::{
    permutation_importance, permutation_importance_feature, FeatureImportance, ImportanceMetric, ImportanceReport,
    PermutationContext,
};
pub use metrics::{accuracy, binary_macro_f1, evaluate, random_baselines, rmse, Baseline, Metrics};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PredictError {
    #[error("need at least 2 training rows, got {0}")]
    TooFewRows(usize),
    #[error("dataset has no features")]
    NoFeatures,
    #[error("model expects {expected} features, dataset has {found}")]
    FeatureMismatch { expected: usize, found: usize },
    #[error("model was trained for {expected:?}, dataset is {found:?}")]
    TaskMismatch { expected: Task, found: Task },
    #[error("no evaluation rows")]
    EmptyEvaluation,
}
