use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// An operation would have produced the zero code, which is not a
    /// `LinearCode`.
    #[error("operation produced the zero code")]
    ZeroCode,

    #[error("decoding failure")]
    DecodingFailure,

    #[error("code is not a generalized Reed-Solomon code: {0}")]
    NotGrs(String),

    /// Parameters in the range where the attack has no distinguisher.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("trial cap exceeded after {trials} trials: {context}")]
    TrialCapExceeded { trials: u64, context: String },

    #[error("attack failed: {0}")]
    AttackFailed(String),

    #[error("malformed input: {0}")]
    Format(String),
}
