//! Polarisation analytics for tree-structured discussion corpora.
//!
//! This crate holds the pure, allocation-only algorithms: corpus structure and
//! period assignment, annotation quality control, stance merging and classifier
//! evaluation, continuous user polarity, per-period interaction graphs, survivorship
//! statistics, feature extraction and a small random-forest harness.
//!
//! Everything that touches files, threads or the command line lives in the
//! `polaris` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod annotation;
pub mod corpus;
pub mod dynamics;
pub mod features;
pub mod network;
pub mod period;
pub mod polarity;
pub mod predict;
pub mod rng;
pub mod special;
pub mod stance;
pub mod stats;

pub use corpus::{Corpus, CorpusBuilder, IngestReport, Kind, RawSubmission, Submission, ThreadId, UserId};
pub use period::{Period, PeriodSchedule};
pub use stance::Stance;
