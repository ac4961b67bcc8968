use thiserror::Error;

/// Errors raised by the arithmetic, construction and coding layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CgwError {
    #[error("root order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("construction produced an invalid matrix: {0}")]
    Construction(String),

    #[error("unsupported root order k={k}; valid k are q+1 for a prime power q ({valid})")]
    UnsupportedK { k: u32, valid: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, CgwError>;

pub(crate) fn parse_err(line: usize, column: usize, msg: impl Into<String>) -> CgwError {
    CgwError::Parse {
        line,
        column,
        msg: msg.into(),
    }
}
