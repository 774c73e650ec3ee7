use std::io;
use std::path::{Path, PathBuf};

use polaris_core::annotation::AnnotationError;
use polaris_core::corpus::CorpusError;
use polaris_core::period::PeriodError;
use polaris_core::predict::PredictError;
use polaris_core::stance::StanceError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{stage}: cannot access {path}: {source}")]
    Io {
        stage: &'static str,
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{stage}: {path}: {message}")]
    Format { stage: &'static str, path: PathBuf, message: String },
    #[error("periods: {0}")]
    Period(#[from] PeriodError),
    #[error("labels: {0}")]
    Stance(#[from] StanceError),
    #[error("qa: {0}")]
    Annotation(#[from] AnnotationError),
    #[error("predict: {0}")]
    Predict(#[from] PredictError),
    #[error("store: {0}")]
    Corpus(#[from] CorpusError),
    #[error("{stage}: {message}")]
    Invalid { stage: &'static str, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(stage: &'static str, path: &Path, source: io::Error) -> Self {
        Error::Io { stage, path: path.to_path_buf(), source }
    }

    pub fn format(stage: &'static str, path: &Path, message: impl ToString) -> Self {
        Error::Format { stage, path: path.to_path_buf(), message: message.to_string() }
    }

    pub fn invalid(stage: &'static str, message: impl ToString) -> Self {
        Error::Invalid { stage, message: message.to_string() }
    }

    /// 2 for bad input data, 3 for bugs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}
