use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty transaction set")]
    EmptyTransactionSet,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown item id {0}")]
    UnknownItem(u32),

    #[error("itemset must be non-empty")]
    EmptyItemset,

    #[error("antecedent and consequent must be disjoint")]
    OverlappingRule,

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("undefined odds configuration")]
    UndefinedOdds,

    #[error("undefined bound configuration")]
    UndefinedBound,

    #[error("bounds violation: raw value {raw} outside [{lower}, {upper}]")]
    BoundsViolation { raw: f64, lower: f64, upper: f64 },

    #[error("inconsistent bounds: lower {lower} exceeds upper {upper}")]
    InvertedBounds { lower: f64, upper: f64 },

    #[error("length mismatch: {0} != {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("undefined tau-b: all values tied in one ranking")]
    UndefinedTauB,

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
