//! Exact arithmetic in `Q(sqrt(d))` and dense linear algebra over it.

mod linalg;
mod scalar;

pub use linalg::{
    independent_subset, is_zero_rational, kernel_basis, project_onto_span, rank, rank_of,
    rational_split, rref, Projector, solve_linear, LinearSolution, QMatrix, QVector,
};
pub use scalar::{is_square_free, parse_scalar, Scalar, ScalarSyntaxError};
