use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("input contains non-finite values")]
    NonFiniteInput,

    #[error("input contains non-positive values")]
    NonPositiveValues,

    #[error("forecaster is not fitted")]
    NotFitted,

    #[error("in-sample prediction unsupported at position {position}")]
    UnsupportedInSample { position: i64 },

    #[error("non-contiguous update: expected new data to start at {expected}, got {got}")]
    NonContiguousUpdate { expected: i64, got: i64 },

    #[error("invalid forecasting horizon: {0}")]
    InvalidHorizon(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("invalid value for parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("optimizer failed: {0}")]
    OptimizerFailed(String),

    #[error("forecast contains non-finite values")]
    NonFiniteForecast,

    #[error("not implemented: {0}")]
    Unimplemented(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("k = {k} exceeds the number of training rows ({n})")]
    KTooLarge { k: usize, n: usize },

    #[error("all grid-search candidates failed")]
    AllCandidatesFailed,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("scaling denominator is zero")]
    ZeroDenominator,

    #[error("record sets cover different series: {0}")]
    SeriesMismatch(String),

    #[error("differences have zero variance")]
    ZeroVariance,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("unsupported significance level {0}; tabulated levels are 0.05 and 0.10")]
    UnsupportedAlpha(f64),

    #[error("all paired differences are zero")]
    AllZeroDifferences,

    #[error("incomplete model x series grid: {0}")]
    IncompleteGrid(String),
}
