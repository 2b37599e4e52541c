use thiserror::Error;

use crate::solver::SolveResult;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("accuracy check failed: {0}")]
    Accuracy(String),

    /// The measure fails the strict subspace concentration condition.
    #[error("measure refused: {0}")]
    SsccRefused(String),

    /// The optimizer stopped away from stationarity; carries the last iterate.
    #[error("solver did not converge: {reason}")]
    NotConverged {
        reason: String,
        result: Box<SolveResult>,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
