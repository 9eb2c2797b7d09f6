use thiserror::Error;

use crate::checks::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not associative on basis triple ({0}, {1}, {2})")]
    AssocViolation(usize, usize, usize),
    #[error("unit law fails on basis element {0}")]
    UnitViolation(usize),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("unsupported characteristic: {0}")]
    CharUnsupported(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {value} out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },
    #[error("search space too large: {size} exceeds cap {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("invalid ring recipe: {0}")]
    InvalidRecipe(String),
    #[error("precondition failed: {reason}")]
    PreconditionFailed {
        reason: String,
        witness: Option<Witness>,
    },
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("element is not central")]
    NotCentral,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("transpose is only defined for matrix rings over a commutative base")]
    TransposeUnsupported,
    #[error("ring is not a matrix ring")]
    NotMatrixRing,
    #[error("2 is not invertible in the base ring")]
    NoHalf,
    #[error("matrix size must be at least 2")]
    RankTooSmall,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(reason: impl Into<String>, witness: Option<Witness>) -> Self {
        Error::PreconditionFailed {
            reason: reason.into(),
            witness,
        }
    }
}
