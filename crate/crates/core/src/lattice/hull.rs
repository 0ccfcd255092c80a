use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{hnf, IntMatrix, Lattice};
use crate::error::{Error, Result};
use crate::field::{rank_of, rational_split, solve_linear, LinearSolution, QMatrix, QVector, Scalar};
use crate::polyhedron::AffineSubspace;

/// `V = aff(W cap Z^n)` with its integral points `x0 + lattice`.
#[derive(Clone, Debug)]
pub struct IntegralHull {
    /// An integral point of `W`, reduced modulo the direction lattice.
    pub point: QVector,
    /// `W cap Z^n` as a translated lattice through `point`.
    pub lattice: Lattice,
    /// Rational equations `C x = d` that cut `V` out of `W`.
    pub equations: Vec<(QVector, Scalar)>,
    /// `V` itself.
    pub hull: AffineSubspace,
}

impl IntegralHull {
    pub fn c_rows(&self) -> Vec<QVector> {
        self.equations.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn d(&self) -> QVector {
        self.equations.iter().map(|(_, d)| d.clone()).collect()
    }
}

/// Computes the affine hull of the integral points of `w`.
pub fn integral_affine_hull(w: &AffineSubspace) -> Result<IntegralHull> {
    let n = w.ambient_dim();
    // For rational x, (u + w sqrt(d)) . x = beta + gamma sqrt(d) splits in two.
    let mut split_rows: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for (a, b) in w.equations() {
        let (u, v) = rational_split(a);
        split_rows.push((u, b.rat().clone()));
        split_rows.push((v, b.irr().clone()));
    }
    let q_rows: Vec<QVector> = split_rows.iter().map(|(r, _)| QVector::from_rationals(r)).collect();
    let q_rhs: QVector = split_rows.iter().map(|(_, b)| Scalar::from(b.clone())).collect();
    if solve_linear(&QMatrix::from_rows(&q_rows, n), &q_rhs)? == LinearSolution::Inconsistent {
        return Err(Error::NoIntegralPoint);
    }

    // Clear denominators row by row.
    let mut int_rows = Vec::new();
    let mut int_rhs = Vec::new();
    for (r, b) in &split_rows {
        let l = r
            .iter()
            .chain(std::iter::once(b))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let lq = BigRational::from_integer(l);
        int_rows.push(r.iter().map(|x| (x * &lq).to_integer()).collect::<Vec<_>>());
        int_rhs.push((b * &lq).to_integer());
    }
    let a = IntMatrix::from_rows(&int_rows, n);
    let h = hnf(&a);
    let rank = h.rank();

    // Forward substitution on H z = s.
    let mut z = vec![BigInt::zero(); n];
    let mut pivot_of_row = vec![None; a.rows()];
    for &(row, col) in &h.pivots {
        pivot_of_row[row] = Some(col);
    }
    for i in 0..a.rows() {
        let mut acc = int_rhs[i].clone();
        let upto = pivot_of_row[i].unwrap_or(rank);
        for (j, zj) in z.iter().enumerate().take(upto) {
            acc -= h.h.get(i, j) * zj;
        }
        match pivot_of_row[i] {
            Some(col) => {
                let (q, r) = acc.div_rem(h.h.get(i, col));
                if !r.is_zero() {
                    return Err(Error::NoIntegralPoint);
                }
                z[col] = q;
            }
            None => {
                if !acc.is_zero() {
                    return Err(Error::NoIntegralPoint);
                }
            }
        }
    }
    let u = h.u.to_qmatrix();
    let x0 = u.mul_vec(&QVector::from_bigints(&z));
    let dirs: Vec<Vec<BigInt>> = (rank..n).map(|j| h.u.column(j)).collect();

    // Canonical direction basis: HNF of the direction columns.
    let k = dirs.len();
    let mut dmat = IntMatrix::zeros(n, k);
    for (j, col) in dirs.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            dmat.set(i, j, x.clone());
        }
    }
    let dh = hnf(&dmat);
    let generators: Vec<QVector> = (0..k).map(|j| QVector::from_bigints(&dh.h.column(j))).collect();
    let mut point = x0;
    for &(row, col) in &dh.pivots {
        let p = Scalar::from_bigint(dh.h.get(row, col).clone());
        let q = (&point[row] / &p).floor();
        if !q.is_zero() {
            point = point.axpy(&-Scalar::from_bigint(q), &generators[col]);
        }
    }

    // C: split rows that cut W down further, taken greedily in order.
    let mut basis_rows: Vec<QVector> = w.equations().iter().map(|(a, _)| a.clone()).collect();
    let mut current = rank_of(&basis_rows, n);
    let mut equations = Vec::new();
    for (r, b) in &split_rows {
        let row = QVector::from_rationals(r);
        if row.is_zero() {
            continue;
        }
        basis_rows.push(row.clone());
        let next = rank_of(&basis_rows, n);
        if next > current {
            current = next;
            equations.push((row, Scalar::from(b.clone())));
        } else {
            basis_rows.pop();
        }
    }
    let hull = w.with_equations(&equations)?;
    let lattice = Lattice::affine(point.clone(), generators)?;
    Ok(IntegralHull {
        point,
        lattice,
        equations,
        hull,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(t: &str) -> QVector {
        t.parse().unwrap()
    }

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn irrational_plane_in_r3() {
        let w = AffineSubspace::new(3, vec![(v("(1, 1, 1*sqrt(2))"), s("1"))]).unwrap();
        let ih = integral_affine_hull(&w).unwrap();
        assert!(ih.point.is_integral() && w.contains(&ih.point));
        let want = Lattice::affine(v("(1, 0, 0)"), vec![v("(1, -1, 0)")]).unwrap();
        assert!(ih.lattice.same_lattice(&want));
        assert_eq!(ih.equations, vec![(v("(1, 1, 0)"), s("1"))]);
        let v_expected = AffineSubspace::new(3, vec![(v("(1, 1, 0)"), s("1")), (v("(0, 0, 1)"), s("0"))]).unwrap();
        assert!(ih.hull.same_set(&v_expected));
    }

    #[test]
    fn whole_space() {
        let ih = integral_affine_hull(&AffineSubspace::whole(3)).unwrap();
        assert_eq!(ih.point, QVector::zeros(3));
        assert!(ih.lattice.same_lattice(&Lattice::integer(3)));
        assert!(ih.equations.is_empty());
    }

    #[test]
    fn parity_obstruction() {
        let w = AffineSubspace::new(1, vec![(v("(2)"), s("1"))]).unwrap();
        assert!(matches!(integral_affine_hull(&w), Err(Error::NoIntegralPoint)));
    }

    #[test]
    fn worked_example_plane() {
        let w = AffineSubspace::new(3, vec![(v("(0, 1, 1*sqrt(2))"), s("0"))]).unwrap();
        let ih = integral_affine_hull(&w).unwrap();
        assert_eq!(ih.equations, vec![(v("(0, 1, 0)"), s("0"))]);
        assert!(ih.lattice.same_lattice(&Lattice::new(3, vec![v("(1, 0, 0)")]).unwrap()));
    }
}
