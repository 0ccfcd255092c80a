//! Lattices, lattice subspaces, projections, enumeration and approximation searches.

mod enumerate;
mod hnf;
mod hull;
mod search;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{
    independent_subset, kernel_basis, project_onto_span, rank, rank_of, rational_split,
    solve_linear, LinearSolution, QMatrix, QVector, Scalar,
};
use crate::polyhedron::{AffineSubspace, HPolyhedron};

pub use enumerate::{enumerate_points, Mode, Region};
pub use hnf::{hnf, int_vector, integer_rows, Hnf, IntMatrix};
pub use hull::{integral_affine_hull, IntegralHull};
pub use search::{dirichlet_approx, point_near_halfline, point_near_subspace};

/// `origin + {sum k_i a_i : k in Z^m}` for linearly independent `a_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient_dim: usize,
    origin: QVector,
    generators: Vec<QVector>,
}

impl Lattice {
    pub fn new(ambient_dim: usize, generators: Vec<QVector>) -> Result<Self> {
        Lattice::affine(QVector::zeros(ambient_dim), generators)
    }

    /// A translated lattice; `origin` need not lie in the span.
    pub fn affine(origin: QVector, generators: Vec<QVector>) -> Result<Self> {
        let n = origin.dim();
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch(format!(
                "generator has {} entries, expected {n}",
                g.dim()
            )));
        }
        if rank_of(&generators, n) != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(Lattice {
            ambient_dim: n,
            origin,
            generators,
        })
    }

    /// `Z^n`.
    pub fn integer(n: usize) -> Self {
        Lattice::new(n, (0..n).map(|i| QVector::unit(n, i)).collect()).expect("unit basis")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn origin(&self) -> &QVector {
        &self.origin
    }

    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    pub fn is_linear(&self) -> bool {
        self.origin.is_zero()
    }

    /// `n x m` matrix with the generators as columns.
    pub fn generator_matrix(&self) -> QMatrix {
        QMatrix::from_columns(&self.generators, self.ambient_dim)
    }

    /// The point `origin + sum y_i a_i`.
    pub fn point(&self, y: &[BigInt]) -> QVector {
        let mut x = self.origin.clone();
        for (yi, g) in y.iter().zip(&self.generators) {
            x = x.axpy(&Scalar::from_bigint(yi.clone()), g);
        }
        x
    }

    /// Coordinates of the direction `v` in the generator basis.
    pub fn direction_coordinates(&self, v: &QVector) -> Option<QVector> {
        match solve_linear(&self.generator_matrix(), v).ok()? {
            LinearSolution::Unique(c) => Some(c),
            LinearSolution::Affine { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }

    /// Coordinates of the point `x` relative to the origin.
    pub fn coordinates(&self, x: &QVector) -> Option<QVector> {
        self.direction_coordinates(&x.sub(&self.origin))
    }

    pub fn contains(&self, x: &QVector) -> bool {
        x.dim() == self.ambient_dim && self.coordinates(x).is_some_and(|c| c.is_integral())
    }

    pub fn contains_direction(&self, v: &QVector) -> bool {
        v.dim() == self.ambient_dim
            && self
                .direction_coordinates(v)
                .is_some_and(|c| c.is_integral())
    }

    /// Mutual membership of generators and equal origins modulo the lattice.
    pub fn same_lattice(&self, other: &Lattice) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.rank() == other.rank()
            && self.generators.iter().all(|g| other.contains_direction(g))
            && other.generators.iter().all(|g| self.contains_direction(g))
            && self.contains_direction(&self.origin.sub(&other.origin))
    }

    /// The lattice with the same generators through `x`.
    pub fn translated_to(&self, x: &QVector) -> Lattice {
        Lattice {
            ambient_dim: self.ambient_dim,
            origin: x.clone(),
            generators: self.generators.clone(),
        }
    }

    /// The smallest affine subspace containing the lattice.
    pub fn affine_hull(&self) -> AffineSubspace {
        AffineSubspace::span(self.ambient_dim, &self.generators).through(&self.origin)
    }

    /// The polyhedron `region` pulled back to lattice coordinates `y`.
    pub fn pullback(&self, region: &HPolyhedron) -> Result<HPolyhedron> {
        region.pullback(&self.origin, &self.generator_matrix())
    }
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(origin {}, generators [", self.origin)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

/// An axis-aligned box `lower <= x <= upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxRegion {
    pub lower: QVector,
    pub upper: QVector,
}

impl BoxRegion {
    pub fn new(lower: QVector, upper: QVector) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch("box bounds differ in length".into()));
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::PreconditionFailed("box lower bound exceeds upper bound".into()));
        }
        Ok(BoxRegion { lower, upper })
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        BoxRegion::new(
            QVector(vec![Scalar::from_int(lo); n]),
            QVector(vec![Scalar::from_int(hi); n]),
        )
        .expect("lo <= hi")
    }

    /// `center +- radius` in every coordinate.
    pub fn around(center: &QVector, radius: &Scalar) -> Self {
        BoxRegion {
            lower: center.iter().map(|c| c - radius).collect(),
            upper: center.iter().map(|c| c + radius).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn contains(&self, x: &QVector) -> bool {
        x.dim() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn to_polyhedron(&self) -> HPolyhedron {
        HPolyhedron::from_box(&self.lower, &self.upper)
    }
}

/// Coordinates of `L` in the lattice basis plus the rational equations
/// cutting out the largest lattice subspace inside it.
struct SplitData {
    m: usize,
    dim_l: usize,
    rational_rows: Vec<Vec<num_rational::BigRational>>,
    l_basis: Vec<QVector>,
}

fn split_data(lattice: &Lattice, l: &[QVector]) -> Result<SplitData> {
    let n = lattice.ambient_dim();
    let m = lattice.rank();
    let idx = independent_subset(l, n);
    let l_basis: Vec<QVector> = idx.iter().map(|&i| l[i].clone()).collect();
    let mut coords = Vec::new();
    for v in &l_basis {
        let c = lattice
            .direction_coordinates(v)
            .filter(|c| &lattice.generator_matrix().mul_vec(c) == v)
            .ok_or_else(|| {
                Error::DimensionMismatch(format!("{v} lies outside the span of the lattice"))
            })?;
        coords.push(c);
    }
    let dim_l = coords.len();
    let annihilator = kernel_basis(&QMatrix::from_rows(&coords, m));
    let mut rational_rows = Vec::new();
    for e in &annihilator {
        let (u, w) = rational_split(e);
        rational_rows.push(u);
        rational_rows.push(w);
    }
    Ok(SplitData {
        m,
        dim_l,
        rational_rows,
        l_basis,
    })
}

fn rational_rank(rows: &[Vec<num_rational::BigRational>], m: usize) -> usize {
    let q: Vec<QVector> = rows.iter().map(|r| QVector::from_rationals(r)).collect();
    rank(&QMatrix::from_rows(&q, m))
}

/// `true` iff the subspace spanned by `l` has a basis of lattice vectors.
pub fn is_lattice_subspace(lattice: &Lattice, l: &[QVector]) -> Result<bool> {
    let data = split_data(lattice, l)?;
    let kernel_dim = data.m - rational_rank(&data.rational_rows, data.m);
    Ok(kernel_dim == data.dim_l)
}

/// Lattice basis of `span(l)` intersected with the lattice, plus a completion
/// to a basis of the whole lattice, both as coefficient vectors.
fn split_basis(lattice: &Lattice, l: &[QVector]) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<QVector>)> {
    let data = split_data(lattice, l)?;
    let kernel_dim = data.m - rational_rank(&data.rational_rows, data.m);
    if kernel_dim != data.dim_l {
        return Err(Error::NotLatticeSubspace);
    }
    let int_rows = integer_rows(&data.rational_rows);
    let r = IntMatrix::from_rows(&int_rows, data.m);
    let h = hnf(&r);
    let rank = h.rank();
    let complement = (0..rank).map(|j| h.u.column(j)).collect();
    let inside = (rank..data.m).map(|j| h.u.column(j)).collect();
    Ok((inside, complement, data.l_basis))
}

/// Lattice basis of `span(l)` intersected with the lattice (as ambient vectors).
pub fn lattice_subspace_basis(lattice: &Lattice, l: &[QVector]) -> Result<Vec<QVector>> {
    let (inside, _, _) = split_basis(lattice, l)?;
    let g = lattice.generator_matrix();
    Ok(inside.iter().map(|c| g.mul_vec(&int_vector(c))).collect())
}

/// Orthogonal projection of the lattice onto the complement of the lattice
/// subspace spanned by `l`.
pub fn project_lattice(lattice: &Lattice, l: &[QVector]) -> Result<Lattice> {
    let (_, complement, l_basis) = split_basis(lattice, l)?;
    let g = lattice.generator_matrix();
    let project = |v: &QVector| v.sub(&project_onto_span(v, &l_basis));
    let generators = complement
        .iter()
        .map(|c| project(&g.mul_vec(&int_vector(c))))
        .collect();
    Lattice::affine(project(lattice.origin()), generators)
}

/// Representatives of the lattice modulo its points in `span(l)`: a lattice
/// through the same origin whose generators complete a basis of the part in
/// `span(l)`. Requires `span(l)` to be a lattice subspace.
pub fn quotient_lattice(lattice: &Lattice, l: &[QVector]) -> Result<Lattice> {
    if l.iter().all(QVector::is_zero) {
        return Ok(lattice.clone());
    }
    let (_, complement, _) = split_basis(lattice, l)?;
    let g = lattice.generator_matrix();
    let generators = complement.iter().map(|c| g.mul_vec(&int_vector(c))).collect();
    Lattice::affine(lattice.origin().clone(), generators)
}

/// The points of `lattice` lying in `w`, or `None` when there are none.
pub fn lattice_in_subspace(lattice: &Lattice, w: &AffineSubspace) -> Result<Option<Lattice>> {
    let m = lattice.rank();
    let g = lattice.generator_matrix();
    let gt = g.transpose();
    let eqs: Vec<(QVector, Scalar)> = w
        .equations()
        .iter()
        .map(|(a, b)| (gt.mul_vec(a), b - &a.dot(lattice.origin())))
        .collect();
    let y_space = match AffineSubspace::new(m, eqs) {
        Ok(s) => s,
        Err(Error::EmptySubspace) => return Ok(None),
        Err(e) => return Err(e),
    };
    let hull = match integral_affine_hull(&y_space) {
        Ok(h) => h,
        Err(Error::NoIntegralPoint) => return Ok(None),
        Err(e) => return Err(e),
    };
    let origin = lattice.origin().add(&g.mul_vec(&hull.point));
    let generators = hull.lattice.generators().iter().map(|d| g.mul_vec(d)).collect();
    Lattice::affine(origin, generators).map(Some)
}
