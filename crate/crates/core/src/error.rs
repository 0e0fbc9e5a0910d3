use thiserror::Error;

use crate::exactalg::Var;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable {0} has no value in the assignment")]
    MissingVariable(Var),

    #[error("expected {expected} entries, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("step size underflow at t = {t}: h = {h:e}")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
