use thiserror::Error;

use crate::algebra::Poly;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("variable index {0} is not declared on this chart")]
    UndeclaredVariable(u32),
    #[error("operands live on different charts")]
    MixedCharts,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("matrix is singular over the fraction field (determinant {determinant})")]
    SingularSystem { determinant: Poly },
    #[error("the zero polynomial has no sign")]
    ZeroPolynomial,
    #[error("not a contact form: {0}")]
    NotContact(String),
    #[error("no tangent Reeb field on the sphere: {0}")]
    NotContactOnSphere(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
