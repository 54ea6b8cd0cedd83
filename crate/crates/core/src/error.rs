use thiserror::Error;

use crate::classes::{TensorClass, Witness};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed data: wrong lengths, non-finite entries, bad indices, bad JSON.
    #[error("invalid input: {0}")]
    Input(String),

    /// The operation is not defined for this tensor shape or structure.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The tensor is not a member of the class the operation requires.
    #[error("tensor is not {class}: {witness}")]
    ClassViolation { class: TensorClass, witness: Witness },

    /// The class margin is too small to place a strictly interior split.
    #[error("degenerate margin: half-slack {epsilon:e} is not positive")]
    DegenerateMargin { epsilon: f64 },

    /// A constructed result failed its own post-condition.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Short machine-readable code used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Input(_) => "input_error",
            Error::Json(_) => "parse_error",
            Error::Precondition(_) => "precondition_failed",
            Error::ClassViolation { .. } => "class_violation",
            Error::DegenerateMargin { .. } => "degenerate_margin",
            Error::Internal(_) => "internal_error",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Error::ClassViolation { witness, .. } => Some(witness),
            _ => None,
        }
    }
}
