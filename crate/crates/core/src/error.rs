use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front-ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller asked for something that does not exist or is malformed.
    Usage,
    /// Input data failed to parse or validate.
    Data,
    /// Anything else: I/O failures, broken caches, bugs.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate {what} id `{id}`")]
    DuplicateId { what: &'static str, id: String },

    #[error("judgment references unknown {what} `{id}`")]
    DanglingReference { what: &'static str, id: String },

    #[error("invalid record `{id}`: {reason}")]
    InvalidRecord { id: String, reason: String },

    #[error("corpus has no lessons")]
    EmptyCorpus,

    #[error("vocabulary is empty after preprocessing")]
    EmptyVocabulary,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown classifier config id `{0}`")]
    UnknownConfigId(String),

    #[error("unknown artifact `{0}`")]
    UnknownArtifact(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("classifier {config_id}: {source}")]
    Classifier {
        config_id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("combination {comb_id}: {source}")]
    Combination {
        comb_id: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model cache {}: {message}", path.display())]
    Cache { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_classifier(self, config_id: &str) -> Self {
        match self {
            e @ Error::Classifier { .. } => e,
            e => Error::Classifier {
                config_id: config_id.to_string(),
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn in_combination(self, comb_id: usize) -> Self {
        Error::Combination {
            comb_id,
            source: Box::new(self),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::UnknownConfigId(_) | Error::UnknownArtifact(_) => {
                ErrorKind::Usage
            }
            Error::Parse { .. }
            | Error::DuplicateId { .. }
            | Error::DanglingReference { .. }
            | Error::InvalidRecord { .. }
            | Error::EmptyCorpus
            | Error::EmptyVocabulary
            | Error::UndefinedMetric(_)
            | Error::Json(_)
            | Error::Csv(_) => ErrorKind::Data,
            Error::Classifier { source, .. } | Error::Combination { source, .. } => source.kind(),
            Error::Cache { .. } | Error::Io { .. } => ErrorKind::Internal,
        }
    }
}
