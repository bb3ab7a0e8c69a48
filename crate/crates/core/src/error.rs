use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("infeasible problem: distance from range(Phi) to y is {distance:.6e}, exceeds epsilon {epsilon:.6e}")]
    Infeasible { distance: f64, epsilon: f64 },

    #[error("ill-conditioned system: condition number {condition:.3e} exceeds {limit:.0e}")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("signal generation failed: {0}")]
    Generation(String),

    #[error("format error in {path}{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format {
        path: String,
        line: Option<usize>,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
