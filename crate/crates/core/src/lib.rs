//! Exact construction and certification of maximal lattice-free convex sets
//! and the intersection cuts they induce.

pub mod cuts;
pub mod error;
pub mod field;
pub mod latfree;
pub mod lattice;
pub mod lp;
pub mod polyhedron;

pub use error::{Error, Result};
pub use field::{QMatrix, QVector, Scalar};
