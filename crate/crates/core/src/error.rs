use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("empty list")]
    EmptyList,
    #[error("empty input")]
    EmptyInput,
    #[error("zero ray")]
    ZeroRay,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid mixed space: n={n}, d={d}")]
    BadDimension { n: usize, d: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("polyhedron contains a line")]
    ImplicitLineality,
    #[error("no generators")]
    EmptyGenerators,
    #[error("point is not among the candidates")]
    PNotInCandidates,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("too few points")]
    TooFewPoints,
    #[error("polyhedron is unbounded")]
    UnboundedInput,
    #[error("no mixed-integer point in the polyhedron")]
    MixedInfeasible,
    #[error("fiber is empty")]
    FiberEmpty,
    #[error("input has rays; a polytope is required")]
    NonPolytopeInput,
    #[error("expected a pure-integer space (d = 0)")]
    NotPureInteger,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
