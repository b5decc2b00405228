use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not orthonormal: ||X^T X - I||_F = {0:e}")]
    NotOrthonormal(f64),

    #[error("retraction failed: X + V is numerically rank deficient")]
    RetractionFailure,

    #[error("line search failed after {backtracks} backtracks (t = {step:e})")]
    LineSearchFailure { backtracks: usize, step: f64 },

    #[error("rounding to a feasible point failed: {0}")]
    RoundingFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle too large: {patterns} support patterns exceed the limit {limit}")]
    OracleSize { patterns: f64, limit: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("relative gap undefined for best-known value 0")]
    UndefinedGap,

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dim(expected: (usize, usize), got: (usize, usize)) -> Self {
        Error::Dimension {
            expected: format!("{}x{}", expected.0, expected.1),
            got: format!("{}x{}", got.0, got.1),
        }
    }

    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::Parameter(_) => "parameter",
            Error::NotOrthonormal(_) => "not_orthonormal",
            Error::RetractionFailure => "retraction",
            Error::LineSearchFailure { .. } => "line_search",
            Error::RoundingFailure(_) => "rounding",
            Error::Precondition(_) => "precondition",
            Error::OracleSize { .. } => "oracle_size",
            Error::Parse { .. } => "parse",
            Error::UndefinedGap => "undefined_gap",
            Error::Input(_) => "input",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
