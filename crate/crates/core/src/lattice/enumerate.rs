use num_bigint::BigInt;
use num_traits::One;

use super::{BoxRegion, Lattice};
use crate::error::{Error, Result};
use crate::field::QVector;
use crate::polyhedron::HPolyhedron;

/// Which points of the region count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Closed,
    /// Strictly inside every inequality (interior relative to the ambient).
    Interior,
    /// Inside the relative interior of the region.
    RelativeInterior,
}

#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    Box(&'a BoxRegion),
    Polyhedron(&'a HPolyhedron),
}

/// Grids larger than this are refused rather than walked.
const GRID_LIMIT: u64 = 4_000_000;

/// All lattice points of a bounded region, sorted lexicographically.
pub fn enumerate_points(lattice: &Lattice, region: Region<'_>, mode: Mode) -> Result<Vec<QVector>> {
    let owned;
    let poly = match region {
        Region::Box(b) => {
            owned = b.to_polyhedron();
            &owned
        }
        Region::Polyhedron(p) => p,
    };
    if poly.ambient_dim() != lattice.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "region lives in R^{}, lattice in R^{}",
            poly.ambient_dim(),
            lattice.ambient_dim()
        )));
    }
    let q = lattice.pullback(poly)?;
    if q.is_empty() {
        return Ok(Vec::new());
    }
    let m = lattice.rank();
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    for k in 0..m {
        let e = QVector::unit(m, k);
        let min = q.min_value(&e).ok_or(Error::UnboundedRegion)?;
        let max = q.max_value(&e).ok_or(Error::UnboundedRegion)?;
        let (a, b) = (min.ceil(), max.floor());
        if a > b {
            return Ok(Vec::new());
        }
        lo.push(a);
        hi.push(b);
    }
    let mut size = BigInt::one();
    for (a, b) in lo.iter().zip(&hi) {
        size *= b - a + BigInt::one();
    }
    if size > BigInt::from(GRID_LIMIT) {
        return Err(Error::SearchExhausted(format!(
            "enumeration grid of {size} points exceeds the limit of {GRID_LIMIT}"
        )));
    }

    let implicit = match mode {
        Mode::RelativeInterior => poly.implicit_equalities(),
        _ => Vec::new(),
    };
    let keep = |x: &QVector| match mode {
        Mode::Closed => poly.contains(x),
        Mode::Interior => poly.interior_contains(x),
        Mode::RelativeInterior => poly.relint_contains_with(x, &implicit),
    };

    let mut out = Vec::new();
    let mut y = lo.clone();
    loop {
        let x = lattice.point(&y);
        if keep(&x) {
            out.push(x);
        }
        // Odometer step.
        let mut k = m;
        loop {
            if k == 0 {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            k -= 1;
            if y[k] < hi[k] {
                y[k] += BigInt::one();
                y[k + 1..m].clone_from_slice(&lo[k + 1..m]);
                break;
            }
        }
    }
}
