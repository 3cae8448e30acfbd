use thiserror::Error;

/// Failures raised by selection, factorization and generation routines.
#[derive(Debug, Error)]
pub enum SelectError {
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("input matrix is rank deficient (rank below {rows})")]
    SingularInput { rows: usize },

    #[error("selected columns do not span the row space")]
    SingularSelection,

    #[error("removing column {index} would break rank (score {score})")]
    RemovalBreaksRank { index: usize, score: f64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("oracle budget exceeded: {required} subsets requested, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("incremental state drifted from recomputation by {deviation:e}")]
    NumericalDrift { deviation: f64 },

    #[error("infeasible graph: {0}")]
    InfeasibleGraph(String),

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = SelectError> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> SelectError {
    SelectError::ContractViolation(msg.into())
}
