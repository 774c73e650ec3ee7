use alloc::string::String;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::corpus::UserId;
use crate::dynamics::{presence_classifier_dataset, PresenceMatrix};
use crate::features::FeatureTable;
use crate::polarity::{by_period, find, UserPeriodStats};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    /// Is the user present in the next period?
    Presence,
    /// The user's polarity in the next period, given presence.
    Polarity,
}

/// Column-major feature matrix with one target per row. Missing values are NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub task: Task,
    pub feature_names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    /// Regression target, or 0.0 / 1.0 for classification.
    pub target: Vec<f64>,
    /// `(user, period)` of each row; the target refers to `period + 1`.
    pub keys: Vec<(UserId, usize)>,
}

impl Dataset {
    pub fn new(task: Task, feature_names: Vec<String>) -> Self {
        let columns = feature_names.iter().map(|_| Vec::new()).collect();
        Self { task, feature_names, columns, target: Vec::new(), keys: Vec::new() }
    }

    pub fn push(&mut self, key: (UserId, usize), values: &[f64], target: f64) {
        assert_eq!(values.len(), self.columns.len(), "one value per feature");
        for (col, v) in self.columns.iter_mut().zip(values) {
            col.push(*v);
        }
        self.target.push(target);
        self.keys.push(key);
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn is_classification(&self) -> bool {
        self.task == Task::Presence
    }
}

/// Join feature rows with next-period outcomes.
///
/// Presence keeps every row whose period has a successor. Polarity additionally
/// requires the user to be present in the next period.
pub fn build_dataset(
    features: &FeatureTable,
    stats: &[UserPeriodStats],
    matrix: &PresenceMatrix,
    task: Task,
) -> Dataset {
    let mut ds = Dataset::new(task, features.names.clone());
    let per_period = by_period(stats, matrix.n_periods());
    let mut values: Vec<f64> = Vec::with_capacity(features.names.len());
    for (k, present_next) in presence_classifier_dataset(matrix, features) {
        let row = &features.rows[k];
        let target = match task {
            Task::Presence => f64::from(u8::from(present_next)),
            Task::Polarity => {
                if !present_next {
                    continue;
                }
                match find(per_period[row.period + 1], row.user) {
                    Some(s) => s.polarity,
                    None => continue,
                }
            }
        };
        values.clear();
        values.extend(row.values.iter().map(|v| v.unwrap_or(f64::NAN)));
        ds.push((row.user, row.period), &values, target);
    }
    ds
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded train/test split that keeps all rows of a user on one side.
pub fn grouped_split(dataset: &Dataset, test_fraction: f64, seed: u64) -> Split {
    let mut users: Vec<UserId> = dataset.keys.iter().map(|k| k.0).collect();
    users.sort_unstable();
    users.dedup();
    users.shuffle(&mut rng::stream(seed, "split", 0));
    let n_test = libm::round(test_fraction.clamp(0.0, 1.0) * users.len() as f64) as usize;
    let mut test_users = users[..n_test].to_vec();
    test_users.sort_unstable();
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (i, (u, _)) in dataset.keys.iter().enumerate() {
        if test_users.binary_search(u).is_ok() {
            test.push(i);
        } else {
            train.push(i);
        }
    }
    Split { train, test }
}
