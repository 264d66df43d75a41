use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid type {t:?}: {reason}")]
    InvalidType { t: Vec<u32>, reason: String },

    #[error("invalid partition {k:?}: parts must be positive and strictly decreasing")]
    InvalidPartition { k: Vec<u32> },

    #[error("invalid shape {0:?}: parts must be positive")]
    InvalidShape(Vec<u32>),

    #[error("invalid profile {0:?}")]
    InvalidProfile(Vec<u32>),

    #[error("invalid echelon sequence {0:?} for size {1}")]
    InvalidEchelon(Vec<usize>, usize),

    #[error("beta matrix violates its constraints: {0}")]
    InvalidBeta(String),

    #[error("ideal: {0}")]
    InvalidIdeal(String),

    #[error("Hilbert-Samuel function did not stabilize below cap {cap}")]
    NonStabilized { cap: u32 },

    #[error("cap {cap} too small: need at least {needed}")]
    CapTooSmall { cap: u32, needed: u32 },

    #[error("characteristic {p} is below the required bound {bound}")]
    CharacteristicTooSmall { p: u64, bound: u64 },

    #[error("census needs {needed} matrices, over the budget of {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("check failed [{reference}]: {detail}")]
    Violation { reference: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn violation(reference: &'static str, detail: impl Into<String>) -> Self {
        Error::Violation {
            reference,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
