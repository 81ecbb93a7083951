use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("free rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("blowup cap exceeded: {count} distinct blocks (cap {cap})")]
    BlowupCap { count: usize, cap: usize },

    #[error("dense cap exceeded: dimension {dim} (cap {cap})")]
    DenseCap { dim: usize, cap: usize },

    #[error("ill-conditioned rank decision: {0}")]
    IllConditioned(String),

    #[error("character table inconsistent: {0}")]
    TableInconsistency(String),

    #[error("invalid multiplication table: {0}")]
    InvalidGroup(String),

    #[error("non-invertible matrix: {0}")]
    NonInvertible(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for failed assertions, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundViolation(_) | Error::NumericalInstability(_) => 2,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        // the message already carries line and column
        Error::Parse(e.to_string())
    }
}
