use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: [usize; 3], got: [usize; 3] },

    #[error("representation mismatch: expected {expected} data")]
    Representation { expected: &'static str },

    #[error("non-finite field value at {point:?}")]
    Evaluation { point: [f64; 3] },

    #[error("characteristic through {point:?} produced a non-finite departure point")]
    Integration { point: [f64; 3] },

    #[error("state diverged (non-finite values) after step {step}")]
    Divergence { step: usize },

    #[error("output sink failed: {0}")]
    Sink(String),

    #[error("dense dimension {dim} exceeds the oracle limit of {limit}")]
    DimensionGuard { dim: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, PauliError>;
