use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative result: {minuend} - {subtrahend}")]
    Underflow { minuend: String, subtrahend: String },
    #[error("cannot parse {0:?} as a fraction")]
    Parse(String),
    #[error("{what} out of range: {detail}")]
    Domain { what: &'static str, detail: String },
    #[error("remaining target is zero")]
    ExhaustedTarget,
    #[error("search budget exhausted with {undecided} membership tests undecided")]
    BudgetExhausted { undecided: u64 },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain { what, detail: detail.into() }
}
