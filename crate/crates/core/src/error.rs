use thiserror::Error;

/// Errors raised by the library. Internal-consistency failures (for example a
/// non-integral hook quotient) are not represented here; they panic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("partition {core} is not a {p}-core")]
    NotACore { core: String, p: u64 },
    #[error("core {core} does not label a block of size {n} at p = {p}")]
    WrongResidue { core: String, n: usize, p: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("zero factor in denominator: {0}")]
    ZeroDenominator(String),
    #[error("zero value has no valuation")]
    ZeroValue,
    #[error("unsupported group type `{0}`")]
    UnsupportedType(String),
    #[error("table data: {0}")]
    TableData(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
