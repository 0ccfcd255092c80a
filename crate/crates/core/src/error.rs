use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid radicand {0}: expected a square-free integer >= 2")]
    InvalidRadicand(u64),
    #[error("mixed radicands sqrt({0}) and sqrt({1})")]
    MixedRadicands(u64, u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("subspace is not a lattice subspace")]
    NotLatticeSubspace,
    #[error("subspace is a lattice subspace")]
    IsLatticeSubspace,
    #[error("region is unbounded")]
    UnboundedRegion,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("no integral point in the affine subspace")]
    NoIntegralPoint,
    #[error("affine subspace is empty")]
    EmptySubspace,
    #[error("polyhedron has no vertices")]
    NoVertices,
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("body is not lattice-free")]
    NotLatticeFree,
    #[error("lineality space is not a lattice subspace")]
    IrrationalLinealityUnsupported,
    #[error("enumeration escaped the budget box")]
    BoxTooSmall,
    #[error("body is not certified maximal")]
    NotCertified,
    #[error("anchor is not in the interior of the body")]
    AnchorNotInterior,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("scene is not two-dimensional")]
    NotTwoDimensional,
    #[error("empty body")]
    EmptyBody,
}

pub type Result<T> = std::result::Result<T, Error>;
