use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaringError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("non-homogeneous input: degree {expected} expected, offending terms: {offending}")]
    NonHomogeneous { expected: u32, offending: String },

    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },

    #[error("singular coordinate change")]
    Singular,

    #[error("({n}, {d}) is outside the range where the bound is claimed")]
    OutOfDomain { n: u64, d: u64 },

    #[error("the forbidden set contains every linear form in the span of the essential variables")]
    ForbiddenSpan,

    #[error("degenerate system: {0}")]
    Degenerate(String),

    #[error("curves do not meet transversally")]
    NonTransversal,

    #[error("form is not in the span of the given powers (residual 2^{residual_log2:.1})")]
    NoFit { residual_log2: f64 },

    #[error("retry budget exhausted while {stage}")]
    RetryExhausted { stage: String, trace: Vec<String> },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl WaringError {
    /// Worth retrying with fresh randomness.
    pub fn is_retriable(&self) -> bool {
        matches!(
            self,
            WaringError::RetryExhausted { .. }
                | WaringError::Degenerate(_)
                | WaringError::NonTransversal
                | WaringError::NoFit { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, WaringError>;
