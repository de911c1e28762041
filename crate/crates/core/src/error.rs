use crate::exact::VarId;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} is not assigned")]
    Unassigned(VarId),
    #[error("pole: {0} = 0 with a negative exponent")]
    Pole(VarId),
    #[error("division leaves a nonzero remainder")]
    NotExact,
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("degenerate lowest eigenvalue (gap {0:e})")]
    Degenerate(f64),
    #[error("lowest eigenvalue {found} differs from {expected}")]
    WrongEigenvalue { found: f64, expected: f64 },
    #[error("reference component vanishes")]
    ZeroReference,
    #[error("non-generic point: {0}")]
    NonGeneric(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("identity {name} failed: {detail}")]
    IdentityFailed { name: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
