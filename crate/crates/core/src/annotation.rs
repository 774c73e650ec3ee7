//! Crowd-annotation quality control: inter-annotator agreement, leave-one-out
//! majority agreement per worker (MAP), allowlisting and the low-confidence filter.
//!
//! A tied top count never produces a majority. Tied items are dropped from MAP
//! denominators and never yield a gold label.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use serde::Serialize;

use crate::stance::Stance;

pub const DEFAULT_MALICIOUS_MAP: f64 = 0.25;
pub const DEFAULT_ALLOW_MAP: f64 = 0.5;
pub const DEFAULT_MIN_ANNOTATIONS: u64 = 20;
pub const DEFAULT_MIN_IAA: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub item_id: String,
    pub worker_id: String,
    pub label: Stance,
}

impl AnnotationRecord {
    pub fn new(item: &str, worker: &str, label: Stance) -> Self {
        Self { item_id: String::from(item), worker_id: String::from(worker), label }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnnotationError {
    #[error("worker {worker:?} annotated item {item:?} more than once")]
    DuplicateAnnotation { item: String, worker: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemAgreement {
    pub item_id: String,
    pub n_annotations: u64,
    pub majority_label: Option<Stance>,
    pub majority_count: u64,
    pub iaa: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkerQuality {
    pub worker_id: String,
    pub n_annotations: u64,
    /// Annotations whose leave-one-out majority was untied.
    pub usable: u64,
    pub agreeing: u64,
    /// `None` when no annotation had an untied leave-one-out majority.
    pub map: Option<f64>,
}

type Counts = [u64; 3];

/// Unique arg-max of the three class counts, or `None` on a tie or no votes.
pub fn majority(counts: &Counts) -> Option<(Stance, u64)> {
    let top = *counts.iter().max().expect("three counts");
    if top == 0 || counts.iter().filter(|&&c| c == top).count() > 1 {
        return None;
    }
    let k = counts.iter().position(|&c| c == top).expect("max exists");
    Some((Stance::ALL[k], top))
}

/// Reject records where a worker labels the same item twice.
pub fn check_unique(records: &[AnnotationRecord]) -> Result<(), AnnotationError> {
    let mut seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    for r in records {
        if !seen.insert((r.item_id.as_str(), r.worker_id.as_str())) {
            return Err(AnnotationError::DuplicateAnnotation {
                item: r.item_id.clone(),
                worker: r.worker_id.clone(),
            });
        }
    }
    Ok(())
}

fn item_counts(records: &[AnnotationRecord]) -> BTreeMap<&str, Counts> {
    let mut counts: BTreeMap<&str, Counts> = BTreeMap::new();
    for r in records {
        counts.entry(r.item_id.as_str()).or_default()[r.label.index()] += 1;
    }
    counts
}

/// Per-item agreement, sorted by item id.
pub fn item_agreement(records: &[AnnotationRecord]) -> Vec<ItemAgreement> {
    item_counts(records)
        .into_iter()
        .map(|(item, c)| {
            let n: u64 = c.iter().sum();
            let top = *c.iter().max().expect("three counts");
            ItemAgreement {
                item_id: String::from(item),
                n_annotations: n,
                majority_label: majority(&c).map(|(s, _)| s),
                majority_count: top,
                iaa: top as f64 / n as f64,
            }
        })
        .collect()
}

/// Share of all annotations that match their item's top count.
pub fn dataset_iaa(agreements: &[ItemAgreement]) -> Option<f64> {
    let n: u64 = agreements.iter().map(|a| a.n_annotations).sum();
    let m: u64 = agreements.iter().map(|a| a.majority_count).sum();
    (n > 0).then(|| m as f64 / n as f64)
}

/// Leave-one-out majority agreement per worker, sorted by worker id.
pub fn worker_map(records: &[AnnotationRecord]) -> Vec<WorkerQuality> {
    let counts = item_counts(records);
    let mut per_worker: BTreeMap<&str, (u64, u64, u64)> = BTreeMap::new();
    for r in records {
        let mut c = counts[r.item_id.as_str()];
        c[r.label.index()] -= 1;
        let e = per_worker.entry(r.worker_id.as_str()).or_default();
        e.0 += 1;
        if let Some((label, _)) = majority(&c) {
            e.1 += 1;
            if label == r.label {
                e.2 += 1;
            }
        }
    }
    per_worker
        .into_iter()
        .map(|(w, (n, usable, agreeing))| WorkerQuality {
            worker_id: String::from(w),
            n_annotations: n,
            usable,
            agreeing,
            map: (usable > 0).then(|| agreeing as f64 / usable as f64),
        })
        .collect()
}

/// Workers whose MAP is defined and strictly below `threshold`.
pub fn flag_malicious(qualities: &[WorkerQuality], threshold: f64) -> BTreeSet<String> {
    qualities
        .iter()
        .filter(|q| q.map.is_some_and(|m| m < threshold))
        .map(|q| q.worker_id.clone())
        .collect()
}

/// Workers with `MAP >= min_map` and at least `min_annotations` annotations.
pub fn build_allowlist(qualities: &[WorkerQuality], min_map: f64, min_annotations: u64) -> BTreeSet<String> {
    qualities
        .iter()
        .filter(|q| q.n_annotations >= min_annotations && q.map.is_some_and(|m| m >= min_map))
        .map(|q| q.worker_id.clone())
        .collect()
}

/// Split items into `(kept, discarded)`; items with `iaa < min_iaa` are discarded.
pub fn low_confidence_filter(
    agreements: Vec<ItemAgreement>,
    min_iaa: f64,
) -> (Vec<ItemAgreement>, Vec<ItemAgreement>) {
    agreements.into_iter().partition(|a| a.iaa >= min_iaa)
}

/// Gold labels for kept items. Tied items are skipped.
pub fn majority_labels(kept: &[ItemAgreement]) -> Vec<(String, Stance)> {
    kept.iter()
        .filter_map(|a| a.majority_label.map(|l| (a.item_id.clone(), l)))
        .collect()
}
