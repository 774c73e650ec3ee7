//! File formats, parallel drivers and the command-line front end for
//! [`polaris_core`].

pub mod analysis;
pub mod cli;
pub mod error;
pub mod jsonl;
pub mod labels;
pub mod modeling;
pub mod output;
pub mod periods;
pub mod pipeline;
pub mod report;
pub mod store;
pub mod synth;

pub use error::{Error, Result};
