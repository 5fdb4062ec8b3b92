use thiserror::Error;

/// Errors surfaced by the public API. Scalar/semiring mixing is always a
/// typed failure, never a silent coercion.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar {scalar} does not belong to semiring {ring}")]
    ForeignScalar { ring: String, scalar: String },

    #[error("semiring mismatch: {left} vs {right}")]
    SemiringMismatch { left: String, right: String },

    #[error("module mismatch: {0}")]
    ModuleMismatch(String),

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("invalid split at ({i},{j}): {got} + {got2} != {want}")]
    BadSplit {
        i: usize,
        j: usize,
        got: String,
        got2: String,
        want: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("no unit candidates available for {0}; supply a finite candidate set")]
    NoUnits(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
