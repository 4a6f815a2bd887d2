use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible signatures: {0}")]
    IncompatibleSignatures(String),

    #[error("invalid axes ({i}, {j}) for dimension {dimension}")]
    InvalidAxes { i: usize, j: usize, dimension: usize },

    #[error("invalid times: {0}")]
    InvalidTimes(String),

    #[error("cannot oversample: {0}")]
    CannotOversample(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("record `{id}`: {reason}")]
    Record { id: String, reason: String },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Wraps the error with the name of the pipeline stage that produced it.
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors caused by user-provided configuration or input files
    /// rather than failures during computation.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Config(_) | Error::Parse { .. } => true,
            Error::Stage { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
