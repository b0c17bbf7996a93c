use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for block order {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("family is not commutative: basis elements {0} and {1} do not commute")]
    NotCommutative(usize, usize),

    #[error("family is not closed under multiplication: product of basis elements {0} and {1} leaves the span")]
    NotClosed(usize, usize),

    #[error("empty basis")]
    EmptyBasis,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("unknown theorem id {0:?} (known: L2.1 L2.2 L3.1 T3.2i T3.2ii C3.3 C3.4 T3.5 P4.1 R4.2 T4.4 T4.5 C4.6 L5.1 T5.2 C5.3)")]
    UnknownTheorem(String),

    #[error("unknown constraint {0:?}")]
    UnknownConstraint(String),

    #[error("unknown algebra kind {0:?} (known: diagonal circulant poly explicit)")]
    UnknownAlgebraKind(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn mismatch(what: impl Into<String>) -> Error {
    Error::DimensionMismatch(what.into())
}
