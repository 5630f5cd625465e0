use thiserror::Error;

/// Errors raised by the dual-matrix kernels, generators and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    Dimension {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("non-finite entry in {part} part at ({row}, {col})")]
    NonFinite {
        part: &'static str,
        row: usize,
        col: usize,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A precondition of the form "a is below b" did not hold.
    #[error("order violation: {what} (residuals: {residuals:?})")]
    OrderViolation { what: String, residuals: Vec<f64> },

    /// A DMPGI required by the operation does not exist.
    #[error("prerequisite failed: {0}")]
    Prerequisite(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("malformed matrix file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
