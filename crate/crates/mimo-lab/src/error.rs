//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible or invalid matrix/vector dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An argument outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical failure in {op}: no convergence after {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: usize },

    /// Operation requires strictly positive singular values.
    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    /// Malformed experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Text-format parse failure, with the 1-based offending line.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
