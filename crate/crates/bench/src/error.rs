use subsel_core::SelectError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] SelectError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl RunError {
    /// Process exit code: 1 usage or input error, 3 numerical failure (2 is
    /// reserved for failed bound verification).
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numerical(SelectError::Format(_) | SelectError::Io(_)) => 1,
            RunError::Numerical(_) => 3,
            _ => 1,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}
