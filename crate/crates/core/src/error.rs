use thiserror::Error;

/// Errors raised by the enumeration pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A configuration value broke one of its invariants. `field` names the
    /// offending input so front ends can report it verbatim.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("snapshot block is empty (N = 0)")]
    EmptySnapshots,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigenvalue {value:e} is negative beyond tolerance {tolerance:e}")]
    NegativeEigenvalue { value: f64, tolerance: f64 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("failed to build worker pool: {0}")]
    WorkerPool(String),
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
