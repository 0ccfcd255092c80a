use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A dense vector of scalars, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVector(pub Vec<Scalar>);

impl QVector {
    pub fn zeros(n: usize) -> Self {
        QVector(vec![Scalar::zero(); n])
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = QVector::zeros(n);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        QVector(values.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn from_bigints(values: &[BigInt]) -> Self {
        QVector(values.iter().cloned().map(Scalar::from_bigint).collect())
    }

    pub fn from_rationals(values: &[BigRational]) -> Self {
        QVector(values.iter().cloned().map(Scalar::from).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &QVector) -> Scalar {
        assert_eq!(self.dim(), other.dim(), "dot product of unequal lengths");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Scalar) -> QVector {
        QVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }

    /// `self + k * other`.
    pub fn axpy(&self, k: &Scalar, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Scalar::is_integer)
    }

    pub fn is_rational(&self) -> bool {
        self.0.iter().all(Scalar::is_rational)
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0.iter().map(Scalar::to_integer).collect()
    }

    /// Index of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    /// Scaled so the first nonzero entry is `1`; the zero vector is unchanged.
    pub fn normalized_leading(&self) -> QVector {
        match self.leading() {
            Some(i) => self.scale(&self.0[i].recip()),
            None => self.clone(),
        }
    }

    /// Scaled so the first nonzero entry is `+1` or `-1`, keeping its sign.
    pub fn normalized_leading_abs(&self) -> QVector {
        match self.leading() {
            Some(i) => self.scale(&self.0[i].abs().recip()),
            None => self.clone(),
        }
    }

    /// The common radicand of all entries, `0` if all are rational.
    pub fn radicand(&self) -> u64 {
        self.0.iter().map(Scalar::radicand).find(|&d| d != 0).unwrap_or(0)
    }

    pub fn concat(&self, other: &QVector) -> QVector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        QVector(v)
    }
}

impl Deref for QVector {
    type Target = Vec<Scalar>;
    fn deref(&self) -> &Vec<Scalar> {
        &self.0
    }
}

impl DerefMut for QVector {
    fn deref_mut(&mut self) -> &mut Vec<Scalar> {
        &mut self.0
    }
}

impl From<Vec<Scalar>> for QVector {
    fn from(v: Vec<Scalar>) -> Self {
        QVector(v)
    }
}

impl FromIterator<Scalar> for QVector {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QVector {
    type Err = Error;
    /// Accepts `(a, b, c)` or a bare whitespace/comma separated list.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        if inner.trim().is_empty() {
            return Ok(QVector(Vec::new()));
        }
        let mut radicand = 0u64;
        let mut out = Vec::new();
        for token in inner.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let x: Scalar = token.parse()?;
            let d = x.radicand();
            if d != 0 {
                if radicand != 0 && radicand != d {
                    return Err(Error::MixedRadicands(radicand, d));
                }
                radicand = d;
            }
            out.push(x);
        }
        Ok(QVector(out))
    }
}

/// A dense row-major matrix of scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: &[QVector], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.dim(), cols, "ragged matrix rows");
            data.extend(r.0.iter().cloned());
        }
        QMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<QVector> = rows.iter().map(|r| QVector::from_ints(r)).collect();
        QMatrix::from_rows(&rows, cols)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[QVector], rows: usize) -> Self {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.dim(), rows, "ragged matrix columns");
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> QVector {
        QVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<QVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &QVector) -> QVector {
        assert_eq!(x.dim(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| self.row(i).dot(x)).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Splits `v = u + w * sqrt(d)` into its rational parts.
pub fn rational_split(v: &QVector) -> (Vec<BigRational>, Vec<BigRational>) {
    v.0.iter().map(|x| (x.rat().clone(), x.irr().clone())).unzip()
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref(a: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..m.cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..m.rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let k = m[(i, c)].clone();
            for j in c..m.cols {
                let delta = &k * &m[(r, j)];
                m[(i, j)] -= &delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &QMatrix) -> usize {
    rref(a).1.len()
}

/// Rank of a list of vectors of common length `n`.
pub fn rank_of(vectors: &[QVector], n: usize) -> usize {
    rank(&QMatrix::from_rows(vectors, n))
}

/// Basis of `{x : A x = 0}`, each vector scaled so its first nonzero entry is 1.
pub fn kernel_basis(a: &QMatrix) -> Vec<QVector> {
    let (m, pivots) = rref(a);
    let mut basis = Vec::new();
    for free in (0..a.cols).filter(|c| !pivots.contains(c)) {
        let mut v = QVector::zeros(a.cols);
        v[free] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&m[(r, free)];
        }
        basis.push(v.normalized_leading());
    }
    basis
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(QVector),
    Affine {
        particular: QVector,
        kernel: Vec<QVector>,
    },
    Inconsistent,
}

impl LinearSolution {
    /// Some solution, if any exists.
    pub fn point(&self) -> Option<&QVector> {
        match self {
            LinearSolution::Unique(x) => Some(x),
            LinearSolution::Affine { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }

    pub fn into_point(self) -> Result<QVector> {
        match self {
            LinearSolution::Unique(x) => Ok(x),
            LinearSolution::Affine { particular, .. } => Ok(particular),
            LinearSolution::Inconsistent => Err(Error::NoSolution),
        }
    }
}

/// Exact Gaussian elimination on `A x = b`. Free variables are set to zero in
/// the particular solution.
pub fn solve_linear(a: &QMatrix, b: &QVector) -> Result<LinearSolution> {
    if b.dim() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {} entries",
            a.rows(),
            b.dim()
        )));
    }
    let n = a.cols();
    let mut aug = QMatrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (m, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut x = QVector::zeros(n);
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[(r, n)].clone();
    }
    if pivots.len() == n {
        Ok(LinearSolution::Unique(x))
    } else {
        Ok(LinearSolution::Affine {
            particular: x,
            kernel: kernel_basis(a),
        })
    }
}

/// Rows of `vectors` kept greedily so that they stay linearly independent.
pub fn independent_subset(vectors: &[QVector], n: usize) -> Vec<usize> {
    let mut kept: Vec<QVector> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        kept.push(v.clone());
        if rank_of(&kept, n) == kept.len() {
            idx.push(i);
        } else {
            kept.pop();
        }
    }
    idx
}

/// Orthogonal projection of `v` onto the span of `basis`.
pub fn project_onto_span(v: &QVector, basis: &[QVector]) -> QVector {
    if basis.is_empty() {
        return QVector::zeros(v.dim());
    }
    // Solve the Gram system (B B^T) c = B v.
    let k = basis.len();
    let mut gram = QMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = basis[i].dot(&basis[j]);
        }
    }
    let rhs: QVector = basis.iter().map(|b| b.dot(v)).collect();
    let c = solve_linear(&gram, &rhs)
        .and_then(LinearSolution::into_point)
        .expect("projection basis must be independent");
    let mut out = QVector::zeros(v.dim());
    for (ci, bi) in c.iter().zip(basis) {
        out = out.axpy(ci, bi);
    }
    out
}

/// Orthogonal projector onto a fixed span, built once by Gram-Schmidt.
#[derive(Clone, Debug)]
pub struct Projector {
    ortho: Vec<QVector>,
    inv_norms: Vec<Scalar>,
    dim: usize,
}

impl Projector {
    pub fn new(basis: &[QVector], dim: usize) -> Self {
        let mut ortho: Vec<QVector> = Vec::new();
        let mut inv_norms = Vec::new();
        for b in basis {
            let mut v = b.clone();
            for (q, inv) in ortho.iter().zip(&inv_norms) {
                let k = &v.dot(q) * inv;
                v = v.axpy(&-k, q);
            }
            if !v.is_zero() {
                inv_norms.push(v.norm_sq().recip());
                ortho.push(v);
            }
        }
        Projector {
            ortho,
            inv_norms,
            dim,
        }
    }

    pub fn rank(&self) -> usize {
        self.ortho.len()
    }

    pub fn project(&self, v: &QVector) -> QVector {
        let mut out = QVector::zeros(self.dim);
        for (q, inv) in self.ortho.iter().zip(&self.inv_norms) {
            out = out.axpy(&(&v.dot(q) * inv), q);
        }
        out
    }

    /// Component orthogonal to the span.
    pub fn reject(&self, v: &QVector) -> QVector {
        v.sub(&self.project(v))
    }
}

/// `true` when every entry is rational and zero-checking in the split is exact.
pub fn is_zero_rational(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn split_examples() {
        let v: QVector = "(1+2*sqrt(2), 3)".parse().unwrap();
        let (u, w) = rational_split(&v);
        assert_eq!(QVector::from_rationals(&u), QVector::from_ints(&[1, 3]));
        assert_eq!(QVector::from_rationals(&w), QVector::from_ints(&[2, 0]));
        let (u, w) = rational_split(&QVector::zeros(2));
        assert!(is_zero_rational(&u) && is_zero_rational(&w));
    }

    #[test]
    fn solve_examples() {
        let a = QMatrix::from_rows(
            &[
                QVector(vec![s("1"), s("1*sqrt(2)")]),
                QVector(vec![s("0"), s("1")]),
            ],
            2,
        );
        let b = QVector(vec![s("1+1*sqrt(2)"), s("1")]);
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolution::Unique(QVector::from_ints(&[1, 1]))
        );
        let a = QMatrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            solve_linear(&a, &QVector::from_ints(&[0, 1])).unwrap(),
            LinearSolution::Inconsistent
        );
        let b = QVector(vec![s("1"), s("1*sqrt(2)")]);
        assert_eq!(
            solve_linear(&QMatrix::identity(2), &b).unwrap(),
            LinearSolution::Unique(b.clone())
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&QMatrix::identity(2)).is_empty());
        let a = QMatrix::from_rows(&[QVector(vec![s("0"), s("1"), s("1*sqrt(2)")])], 3);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], QVector::from_ints(&[1, 0, 0]));
        assert_eq!(k[1], QVector(vec![s("0"), s("1"), s("-1/2*sqrt(2)")]));
        let k = kernel_basis(&QMatrix::zeros(1, 2));
        assert_eq!(k, vec![QVector::unit(2, 0), QVector::unit(2, 1)]);
    }

    #[test]
    fn projection() {
        let p = project_onto_span(&QVector::from_ints(&[1, 0]), &[QVector::from_ints(&[1, -1])]);
        assert_eq!(p, QVector(vec![s("1/2"), s("-1/2")]));
    }
}
