//! Label and annotation CSV files.

use std::path::Path;
use std::str::FromStr;

use polaris_core::annotation::AnnotationRecord;
use polaris_core::stance::{LabelSource, SourceKind};
use polaris_core::Stance;
use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Deserialize)]
struct LabelRow {
    submission_id: String,
    label: String,
    #[serde(default)]
    #[allow(dead_code)]
    confidence: Option<f64>,
}

#[derive(Deserialize)]
struct AnnotationRow {
    item_id: String,
    worker_id: String,
    label: String,
}

fn reader(path: &Path, stage: &'static str) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(stage, path, io),
            other => Error::format(stage, path, format!("{other:?}")),
        })
}

fn stance(text: &str, path: &Path, stage: &'static str, line: u64) -> Result<Stance> {
    Stance::from_str(text).map_err(|e| Error::format(stage, path, format!("line {line}: {e}")))
}

/// `submission_id,label[,confidence]`; reddit prefixes on ids are stripped.
pub fn read_label_source(path: &Path, kind: SourceKind) -> Result<LabelSource> {
    let mut source = LabelSource::new(path.display().to_string(), kind);
    let mut rdr = reader(path, "labels")?;
    for (k, row) in rdr.deserialize::<LabelRow>().enumerate() {
        let line = k as u64 + 2;
        let row = row.map_err(|e| Error::format("labels", path, format!("line {line}: {e}")))?;
        let id = crate::jsonl::strip_prefix(&row.submission_id).to_string();
        let label = stance(&row.label, path, "labels", line)?;
        if source.assignments.insert(id.clone(), label).is_some_and(|old| old != label) {
            return Err(Error::format("labels", path, format!("line {line}: conflicting labels for {id:?}")));
        }
    }
    Ok(source)
}

/// `item_id,worker_id,label`.
pub fn read_annotations(path: &Path) -> Result<Vec<AnnotationRecord>> {
    let mut rdr = reader(path, "qa")?;
    let mut out = Vec::new();
    for (k, row) in rdr.deserialize::<AnnotationRow>().enumerate() {
        let line = k as u64 + 2;
        let row = row.map_err(|e| Error::format("qa", path, format!("line {line}: {e}")))?;
        let label = stance(&row.label, path, "qa", line)?;
        out.push(AnnotationRecord { item_id: row.item_id, worker_id: row.worker_id, label });
    }
    Ok(out)
}
