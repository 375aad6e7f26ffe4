use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request exceeds a hard resource bound (table sizes, b! enumerations).
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A byte stream does not match the expected file format.
    #[error("format error: {0}")]
    Format(String),

    /// An iterative numeric procedure failed to converge. Carries the last
    /// estimate so callers can still inspect it.
    #[error("numeric failure: {what} (last estimate {last_estimate})")]
    NumericFailure { what: String, last_estimate: f64 },

    /// Training produced a non-finite loss. Carries the step and the penalty
    /// breakdown serialized as JSON for diagnostics.
    #[error("non-finite loss at step {step}")]
    TrainAbort { step: u64, breakdown_json: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
