//! Period schedules as a JSON array of `{name, start_utc, end_utc}`.

use std::path::Path;

use polaris_core::PeriodSchedule;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodEntry {
    pub name: String,
    pub start_utc: i64,
    pub end_utc: i64,
}

pub fn parse_periods(text: &str, path: &Path) -> Result<PeriodSchedule> {
    let entries: Vec<PeriodEntry> = serde_json::from_str(text).map_err(|e| Error::format("periods", path, e))?;
    Ok(PeriodSchedule::new(entries.into_iter().map(|e| (e.name, e.start_utc, e.end_utc)))?)
}

pub fn load_periods(path: &Path) -> Result<PeriodSchedule> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io("periods", path, e))?;
    parse_periods(&text, path)
}

pub fn to_entries(schedule: &PeriodSchedule) -> Vec<PeriodEntry> {
    schedule
        .periods()
        .iter()
        .map(|p| PeriodEntry { name: p.name.clone(), start_utc: p.start_utc, end_utc: p.end_utc })
        .collect()
}
