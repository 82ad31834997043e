use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("not an odd prime: {0}")]
    NotOddPrime(u64),
    #[error("character depth {depth} too small for valuation {val}")]
    DepthTooSmall { depth: i64, val: i64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("vectors do not span a full-rank lattice")]
    NotFullRank,
    #[error("lattice is not in family {0}")]
    FamilyMismatch(&'static str),
    #[error("vertex lattice has type {got}, expected {expected}")]
    TypeMismatch { expected: i64, got: i64 },
    #[error("matrix is not invertible")]
    Singular,
    #[error("degenerate quadratic form")]
    Degenerate,
    #[error("function is not invariant under the requested window")]
    Window,
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("stabilization failed: {0}")]
    Unstable(String),
    #[error("guardrail: {0}")]
    Guardrail(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precision exhausted (needed {needed}, have {have})")]
    Precision { needed: i64, have: i64 },
}

pub type Result<T> = std::result::Result<T, SpinError>;
