use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram construction failed: {0}")]
    Construction(String),
    #[error("component {0:?} is not an affine diagram")]
    NotAffine(Vec<usize>),
    #[error("partial a-vector does not determine a unique solution")]
    Underdetermined,
    #[error("partial a-vector is inconsistent with the lattice relations")]
    Inconsistent,
    #[error("completed a-vector is not integral")]
    NonIntegral,
    #[error("a-vector is not in the image of N")]
    NotInImage,
    #[error("vector is not in the closed positive cone")]
    NotInCone,
    #[error("cone data inconsistent: {0}")]
    InconsistentCone(String),
    #[error("no diagram pattern matches vertices {0:?}")]
    Unclassifiable(Vec<usize>),
    #[error("vector ({0},{1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("shape {0} has no singularity profile")]
    UnknownShape(String),
    #[error("polygon does not close")]
    NotClosed,
    #[error("fan recurrence does not close")]
    ClosureFailure,
    #[error("surgery triangles do not fit inside the polygon")]
    TrianglesOverlap,
    #[error("polygon has zero volume")]
    ZeroVolume,
    #[error("parity condition fails at index {0}")]
    ParityViolation(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("type II model needs an even multiple, got m={0} for {1}")]
    OddMultiple(i64, String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
