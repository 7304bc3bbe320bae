use thiserror::Error;

/// Errors raised by the construction, evaluation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point {0} is a pole")]
    Pole(String),

    #[error("invalid series field `{field}`: {reason}")]
    InvalidSeries { field: String, reason: String },

    #[error("series has non-real coefficients; split it with `realify` first")]
    NotReal,

    #[error("no sign change found: {0}")]
    NoBracket(String),

    #[error("degenerate saddle point: f''(t) vanishes")]
    DegenerateSaddle,

    #[error("numerical inconsistency: {0}")]
    Inconsistent(String),

    #[error("table reproduction failed: {0}")]
    Reproduction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
