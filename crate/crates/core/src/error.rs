use alloc::string::String;

use crate::sdp::SolveFailure;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not positive semidefinite (least eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("solver failed: {0}")]
    Solver(SolveFailure),
    #[error("dual solution infeasible beyond tolerance: {0}")]
    DualInfeasible(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
