//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^H| = {residual:.3e} (tolerance {tolerance:.1e})")]
    NonHermitian { residual: f64, tolerance: f64 },

    #[error("not a valid state: {0}")]
    NotPositive(String),

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("budget exceeded: {what} requires {required}, limit is {limit}")]
    Budget { what: &'static str, required: f64, limit: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::NonHermitian { .. }
            | Error::NotPositive(_)
            | Error::DimensionTooLarge { .. }
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::Budget { .. } => 3,
            Error::Numerical(_) | Error::Consistency(_) => 4,
            Error::Io(_) => 1,
        }
    }
}
