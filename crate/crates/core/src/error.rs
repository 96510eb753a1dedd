use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty board")]
    EmptyBoard,
    #[error("first cell of a domino arrangement must be a black square")]
    FirstCellNotBlack,
    #[error("last cell of a square arrangement must not be black")]
    LastCellBlack,
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("board of {size} cells exceeds the enumeration limit of {limit} (set LASTSQ_MAX_CELLS to override)")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("inconsistent filter: {0}")]
    InconsistentFilter(String),
    #[error("arrangement is not in the plus class")]
    NotPlusClass,
    #[error("arrangement lies outside the conjugation domain")]
    OutsideDomain,
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("invalid marked colored board: {0}")]
    InvalidBoard(String),
    #[error("result is not an integer: {0}")]
    NonIntegralResult(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::InternalInvariantViolation(msg.into())
    }
}
