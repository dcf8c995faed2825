use thiserror::Error;

/// Errors raised by channel construction, validation and capacity evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parameter out of domain: {0}")]
    DomainError(String),

    #[error("map is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("index {index} out of range for {len} blocks")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("decay rates out of level {level} sum to {total} > 1")]
    RateOverflow { level: usize, total: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("degradability undetermined and bounds do not close: lower {lower}, upper {upper}")]
    UndeterminedDegradability { lower: f64, upper: f64 },

    #[error("invalid channel document: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
