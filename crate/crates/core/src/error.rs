use thiserror::Error;

/// Errors shared across the geometry kernel and the solvers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds supported maximum")]
    DimensionTooLarge(usize),
    #[error("body or system is unbounded")]
    Unbounded,
    #[error("body is empty / system infeasible")]
    EmptyBody,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("zero or near-zero vector where a direction is required")]
    ZeroVector,
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("direction sets do not match")]
    DirectionMismatch,
    #[error("directions do not span the ambient space; volume is identically zero")]
    RankDeficientDirections,
    #[error("direction set is contained in a closed half-sphere")]
    HalfSphereViolation,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("too many subsets to enumerate ({0})")]
    TooManySubsets(usize),
    #[error("too many transversals to enumerate ({0})")]
    TooManyTransversals(usize),
    #[error("theorem arity mismatch: expected {expected}, got {got}")]
    TheoremArityMismatch { expected: usize, got: usize },
    #[error("search exhausted without finding the guaranteed object")]
    SearchExhausted,
    #[error("search failed after {0} restarts")]
    SearchFailed(usize),
    #[error("no finite epsilon admits a simultaneous approximation")]
    NoFiniteEps,
    #[error("partition search found no certificate")]
    NotFound,
    #[error("containment audit failed: {0}")]
    ContainmentAuditFailed(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
