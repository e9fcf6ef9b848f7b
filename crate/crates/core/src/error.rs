use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed text input.
    Parse,
    /// Well-formed input that violates a mathematical invariant.
    Validation,
    /// A caller broke an operation's precondition.
    Usage,
    /// An internal invariant failed; this is a bug.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range 2 <= p < 2^31")]
    ModulusOutOfRange(u64),
    #[error("mixed-field operands (p = {0} and p = {1})")]
    MixedField(u32, u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),

    #[error("grading violation at entry ({row}, {col}): row degree must be column degree - 1")]
    Grading { row: usize, col: usize },
    #[error("filtration violation at entry ({row}, {col}): row enters after column")]
    Filtration { row: usize, col: usize },
    #[error("differential does not square to zero: (d*d)[{row}, {col}] != 0")]
    SquareNonZero { row: usize, col: usize },
    #[error("generator {generator} has degree 0 but a non-empty boundary")]
    DegreeZeroBoundary { generator: usize },
    #[error("generator {generator} has invalid entrance time {value}")]
    InvalidEntrance { generator: usize, value: f64 },
    #[error("column {col} refers to row {row}, but only {size} generators exist")]
    IndexOutOfRange { row: usize, col: usize, size: usize },
    #[error("entry ({row}, {col}) has a coefficient that vanishes mod p")]
    ZeroCoefficient { row: usize, col: usize },
    #[error("entry ({row}, {col}) is listed twice")]
    DuplicateEntry { row: usize, col: usize },

    #[error("invalid distance matrix: {0}")]
    InvalidDistances(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),

    #[error("usage error: {0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Usage(_) | Error::MixedField(..) | Error::DivisionByZero(_) => ErrorKind::Usage,
            Error::Invariant(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
