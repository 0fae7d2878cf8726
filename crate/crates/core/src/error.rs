use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidField(u64),
    #[error("division by {n}! is impossible in characteristic {p}")]
    CharDivision { n: u64, p: u64 },
    #[error("constant term is not a unit")]
    NotAUnit,
    #[error("requested order exceeds the available information: {0}")]
    OrderMismatch(String),
    #[error("no m-th root: characteristic {p} divides {m}")]
    RootObstruction { m: u64, p: u64 },
    #[error("constant-term matrix is singular")]
    SingularAtOrigin,
    #[error("exact t-shift unavailable for truncated-series coefficients")]
    ShiftUnavailable,
    #[error("bad expansion point: {0}")]
    BadPoint(String),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("span is not closed under the derivation: {0}")]
    SpanNotClosed(String),
    #[error("operation requires characteristic 0, field has characteristic {0}")]
    CharNotZero(u64),
    #[error("base ring or truncation mismatch: {0}")]
    BaseMismatch(String),
    #[error("insufficient truncation order: need {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },
    #[error("reduction exceeds degree bound {0}")]
    ReductionOverflow(usize),
    #[error("group equations are not diagonal: {0}")]
    NotDiagonal(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    Semantic(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }
}
