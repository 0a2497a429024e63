use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid scalar context: {0}")]
    InvalidContext(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("generator index {index} out of range (algebra has {count} generators)")]
    InvalidGenerator { index: usize, count: usize },

    #[error("operands belong to different algebras")]
    SpecMismatch,

    #[error("operation requires {expected}, found {found}")]
    WrongMode { expected: &'static str, found: &'static str },

    #[error("expression is not polynomial: {0}")]
    NotPolynomial(String),

    #[error("negative power of a non-scalar element")]
    NegativePower,

    #[error("Jacobian determinant vanishes: map is not invertible")]
    SingularJacobian,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("cannot compose: {0}")]
    Composition(String),

    #[error("degree bound must be at least 1")]
    DegreeBound,

    #[error("{0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
