use thiserror::Error;

/// Errors raised by the geometry, sampling and density layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("two vertices share the first coordinate {0}")]
    TiedFirstCoordinate(f64),
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("non-generic configuration: {0}")]
    NonGeneric(String),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("point is not in the interior of the cone")]
    NotInterior,
    #[error("cone is lower-dimensional (n = {n} < {required})")]
    LowerDimensional { n: usize, required: usize },
    #[error("empty cell: sign vector has no interior solution")]
    EmptyCell,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("iteration cap of {0} reached")]
    IterationCap(u64),
    #[error("no complete cell inside the window")]
    EmptyWindow,
    #[error("polytope has zero volume")]
    ZeroVolume,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
