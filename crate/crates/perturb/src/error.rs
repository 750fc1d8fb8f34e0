//! Error type shared by every module.

use thiserror::Error;

/// Failures raised by the engines. Each variant maps onto one CLI exit code
/// through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// Inversion inside an extension tower met a nontrivial factor of the
    /// defining polynomial at `level`. `factor` is printed in the generator `z`.
    #[error("zero divisor at tower level {level}: modulus has factor {factor}")]
    ZeroDivisor { level: usize, factor: String },
    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("truncation order too low: {0}")]
    InsufficientOrder(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("spectra of the diagonal blocks overlap")]
    SpectraOverlap,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ramification limit reached: {0}")]
    RamificationLimit(String),
    #[error("reduction stalled at epsilon-rank one: {0}")]
    StalledH1(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl Error {
    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::StalledH1(_) | Error::RamificationLimit(_) => 4,
            Error::InsufficientOrder(_) => 5,
            _ => 3,
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn order(msg: impl Into<String>) -> Self {
        Error::InsufficientOrder(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
