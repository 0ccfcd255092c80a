use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{QMatrix, QVector, Scalar};

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = Scalar::from_bigint(self.get(i, j).clone());
            }
        }
        m
    }

    /// Exact determinant of a square matrix (fraction-free elimination).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &m[n - 1][n - 1]
    }

    fn column_op(&mut self, k: usize, j: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
        // (col_k, col_j) <- (s col_k + t col_j, u col_k + v col_j)
        for i in 0..self.rows {
            let a = self.get(i, k).clone();
            let b = self.get(i, j).clone();
            self.set(i, k, s * &a + t * &b);
            self.set(i, j, u * &a + v * &b);
        }
    }

    fn add_column_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, target) - q * self.get(i, source);
            self.set(i, target, v);
        }
    }

    fn negate_column(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Column Hermite normal form `H = A U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, column)` of each pivot; columns are `0..rank` in order.
    pub pivots: Vec<(usize, usize)>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Column-style HNF: `H = A U` with `U` unimodular, `H` lower-triangular in
/// echelon profile, positive pivots, and entries left of each pivot reduced
/// into `[0, pivot)`. Columns past the rank are zero.
pub fn hnf(a: &IntMatrix) -> Hnf {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols());
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..a.rows() {
        if k == a.cols() {
            break;
        }
        for j in k + 1..a.cols() {
            if h.get(i, j).is_zero() {
                continue;
            }
            let x = h.get(i, k).clone();
            let y = h.get(i, j).clone();
            let eg = x.extended_gcd(&y);
            let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
            if g.is_negative() {
                g = -g;
                s = -s;
                t = -t;
            }
            let cu = -(&y / &g);
            let cv = &x / &g;
            h.column_op(k, j, &s, &t, &cu, &cv);
            u.column_op(k, j, &s, &t, &cu, &cv);
        }
        if h.get(i, k).is_zero() {
            continue;
        }
        if h.get(i, k).is_negative() {
            h.negate_column(k);
            u.negate_column(k);
        }
        let p = h.get(i, k).clone();
        for j in 0..k {
            let q = h.get(i, j).div_floor(&p);
            if !q.is_zero() {
                h.add_column_multiple(j, k, &q);
                u.add_column_multiple(j, k, &q);
            }
        }
        pivots.push((i, k));
        k += 1;
    }
    Hnf { h, u, pivots }
}

/// Rows scaled by their least common denominator into integer rows.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Integer vector to scalar vector.
pub fn int_vector(v: &[BigInt]) -> QVector {
    QVector::from_bigints(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_fixed() {
        let a = IntMatrix::identity(2);
        let r = hnf(&a);
        assert_eq!(r.h, a);
        assert_eq!(r.u, a);
    }

    #[test]
    fn reduces_to_identity() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let r = hnf(&a);
        assert_eq!(r.h, IntMatrix::identity(2));
        assert_eq!(a.mul(&r.u), r.h);
        assert_eq!(r.u.determinant().abs(), BigInt::one());
    }

    #[test]
    fn diagonal_is_fixed() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let r = hnf(&a);
        assert_eq!(r.h, a);
        assert_eq!(r.u, IntMatrix::identity(2));
    }

    #[test]
    fn rank_deficient() {
        let a = IntMatrix::from_i64(&[&[2, 4, 6], &[1, 2, 3]]);
        let r = hnf(&a);
        assert_eq!(r.rank(), 1);
        assert_eq!(a.mul(&r.u), r.h);
        assert!(r.h.column(1).iter().all(Zero::is_zero));
        assert_eq!(r.u.determinant().abs(), BigInt::one());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).determinant(), BigInt::from(1));
        assert_eq!(
            IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]).determinant(),
            BigInt::from(-2)
        );
    }
}
