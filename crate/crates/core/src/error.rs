use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("index out of bounds: {0}")]
    Bounds(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("element not in ground set: {0}")]
    GroundSet(String),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("empty variety")]
    EmptyVariety,

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { message, .. } => Error::Parse { line, message },
            other => Error::Parse { line, message: other.to_string() },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
