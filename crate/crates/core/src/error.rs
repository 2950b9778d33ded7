use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the walk, analysis, oracle and sweep layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("walk support reached the lattice edge: {steps} steps requested with capacity {capacity}")]
    Capacity { steps: usize, capacity: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("collapse failed: {0}")]
    Collapse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("wavefront undefined at t = {t}: right half of the distribution is empty")]
    UndefinedFront { t: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed {kind} file at line {line}: {message}")]
    Parse {
        kind: &'static str,
        line: usize,
        message: String,
    },

    #[error("existing output {path} does not belong to this plan: {reason}")]
    ResumeMismatch { path: PathBuf, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input parameters rather than by a
    /// computation that went wrong.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Config(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
