use thiserror::Error;

/// Errors raised by the decision engine, the cost model, the scheduler and
/// the experiment driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid fuzzy number ({l}, {m}, {u}): bounds must satisfy l <= m <= u")]
    InvalidFuzzyNumber { l: f64, m: f64, u: f64 },

    #[error("value {0} is not a positive judgment in [1/9, 9]")]
    InvalidJudgment(f64),

    #[error("comparison matrix: {0}")]
    InvalidComparisonMatrix(String),

    #[error("consistency ratio is tabulated for at most 10 criteria, got {0}")]
    TooManyCriteria(usize),

    #[error("criteria weights: {0}")]
    InvalidWeights(String),

    #[error("decision matrix: {0}")]
    InvalidDecisionMatrix(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("benefit criterion {0} is zero for every alternative")]
    AllZeroBenefitColumn(usize),

    #[error("cost criterion {0} has a non-positive rating")]
    NonPositiveCostRating(usize),

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("rank weight and speed weight must sum to 1 (got {wq} + {we})")]
    WeightPair { wq: f64, we: f64 },

    #[error("invalid task {id}: {reason}")]
    InvalidTask { id: usize, reason: String },

    #[error("invalid device {id}: {reason}")]
    InvalidDevice { id: usize, reason: String },

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid workload: {0}")]
    InvalidWorkload(String),

    #[error("instance too large for exhaustive search: {tasks} tasks x {devices} devices")]
    InstanceTooLarge { tasks: usize, devices: usize },

    #[error("load variance of an empty device set")]
    EmptyLoadSet,

    #[error("config: {key} = {value}: {reason}")]
    Config {
        key: String,
        value: String,
        reason: String,
    },

    #[error("io: {0}")]
    Io(String),

    #[error("cell {cell}: {source}")]
    Cell { cell: String, source: Box<Error> },
}

impl Error {
    pub(crate) fn config(
        key: impl Into<String>,
        value: impl ToString,
        reason: impl Into<String>,
    ) -> Self {
        Error::Config {
            key: key.into(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by user input files rather than by a run.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config { .. }
                | Error::InvalidComparisonMatrix(_)
                | Error::InvalidJudgment(_)
                | Error::WeightPair { .. }
                | Error::InvalidWeights(_)
                | Error::TooManyCriteria(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
