//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use latcut_core::field::{solve_linear, LinearSolution};
use latcut_core::lattice::{Hnf, IntMatrix};
use latcut_core::lp::{LinearProgram, Relation};
use latcut_core::{QMatrix, QVector, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(t: &str) -> QVector {
    t.parse().unwrap()
}

pub fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

pub fn ratio(rng: &mut impl Rng, span: i64, den: i64) -> Scalar {
    Scalar::ratio(rng.gen_range(-span..=span), rng.gen_range(1..=den))
}

/// `a + b sqrt(2)` with small random rationals.
pub fn quad(rng: &mut impl Rng, span: i64, den: i64) -> Scalar {
    let a = ratio(rng, span, den);
    let b = ratio(rng, span, den);
    let root = Scalar::sqrt_of(2).unwrap();
    &a + &(&b * &root)
}

pub fn rational_vector(rng: &mut impl Rng, n: usize, span: i64, den: i64) -> QVector {
    QVector((0..n).map(|_| ratio(rng, span, den)).collect())
}

/// What exhaustive vertex enumeration says about an LP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Brute {
    Infeasible,
    Unbounded,
    Optimal(Scalar),
}

/// Rows `a.x <= b`, with equalities kept separately.
struct System {
    le: Vec<(QVector, Scalar)>,
    eq: Vec<(QVector, Scalar)>,
}

fn system(lp: &LinearProgram, homogeneous: bool) -> System {
    let n = lp.num_vars();
    let rhs = |b: &Scalar| if homogeneous { Scalar::zero() } else { b.clone() };
    let mut le = Vec::new();
    let mut eq = Vec::new();
    for c in &lp.constraints {
        match c.relation {
            Relation::Le => le.push((c.row.clone(), rhs(&c.rhs))),
            Relation::Ge => le.push((c.row.neg(), rhs(&-&c.rhs))),
            Relation::Eq => eq.push((c.row.clone(), rhs(&c.rhs))),
        }
    }
    for j in 0..n {
        if let Some(l) = &lp.lower[j] {
            le.push((QVector::unit(n, j).neg(), rhs(&-l)));
        }
        if let Some(u) = &lp.upper[j] {
            le.push((QVector::unit(n, j), rhs(u)));
        }
    }
    System { le, eq }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vertices of `{x : le rows, eq rows}` found by solving every square
/// subsystem of tight rows.
fn vertices(sys: &System, n: usize) -> Vec<QVector> {
    let mut out: Vec<QVector> = Vec::new();
    let need = n.saturating_sub(sys.eq.len());
    for pick in choose(sys.le.len(), need) {
        let rows: Vec<&(QVector, Scalar)> = sys.eq.iter().chain(pick.iter().map(|&i| &sys.le[i])).collect();
        let a = QMatrix::from_rows(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>(), n);
        let b = QVector(rows.iter().map(|r| r.1.clone()).collect());
        let Ok(LinearSolution::Unique(x)) = solve_linear(&a, &b) else {
            continue;
        };
        let ok = sys.le.iter().all(|(r, b)| &r.dot(&x) <= b) && sys.eq.iter().all(|(r, b)| &r.dot(&x) == b);
        if ok && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Needs a finite lower bound on every variable, so the feasible set is
/// pointed and its recession cone sits in the nonnegative orthant.
pub fn brute_force_lp(lp: &LinearProgram) -> Brute {
    let n = lp.num_vars();
    assert!(lp.lower.iter().all(Option::is_some), "oracle needs lower bounds");
    let verts = vertices(&system(lp, false), n);
    if verts.is_empty() {
        return Brute::Infeasible;
    }
    // Extreme rays of the recession cone, normalized by sum d = 1.
    let mut cone = system(lp, true);
    cone.eq.push((QVector(vec![Scalar::one(); n]), Scalar::one()));
    if vertices(&cone, n).iter().any(|d| lp.objective.dot(d).is_negative()) {
        return Brute::Unbounded;
    }
    Brute::Optimal(verts.iter().map(|x| lp.objective.dot(x)).min().unwrap())
}

/// A random LP over `x >= 0` with at most 4 variables and 6 rows.
pub fn random_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(0..=6);
    let mut lp = LinearProgram::new(n).minimize(QVector((0..n).map(|_| Scalar::from_int(rng.gen_range(-4..=4))).collect()));
    for j in 0..n {
        lp.nonnegative(j);
        if rng.gen_bool(0.2) {
            lp.set_upper(j, Scalar::from_int(rng.gen_range(0..=5)));
        }
    }
    for _ in 0..m {
        let row = QVector((0..n).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect());
        let rhs = Scalar::from_int(rng.gen_range(-4..=8));
        match rng.gen_range(0..6) {
            0 => lp.equal(row, rhs),
            1 | 2 => lp.ge(row, rhs),
            _ => lp.le(row, rhs),
        }
    }
    lp
}

pub fn int_matrix(rng: &mut impl Rng, n: usize, span: i64) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-span..=span))).collect())
        .collect();
    IntMatrix::from_rows(&rows, n)
}

/// Determinant by cofactor expansion.
pub fn det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let mut minor = IntMatrix::zeros(n - 1, n - 1);
        for i in 1..n {
            let mut c = 0;
            for k in 0..n {
                if k != j {
                    minor.set(i - 1, c, a.get(i, k).clone());
                    c += 1;
                }
            }
        }
        let term = a.get(0, j) * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Whether every column of `b` is an integer combination of the columns of
/// the nonsingular square matrix `a` (Cramer's rule, exact integers).
pub fn columns_in_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    let da = det(a);
    assert!(!da.is_zero(), "needs a nonsingular matrix");
    (0..b.cols()).all(|j| {
        (0..a.cols()).all(|i| {
            let mut m = a.clone();
            for r in 0..a.rows() {
                m.set(r, i, b.get(r, j).clone());
            }
            (det(&m) % &da).is_zero()
        })
    })
}

/// Independent checks of a column Hermite normal form of `a`.
pub fn check_hnf(a: &IntMatrix, h: &Hnf) -> Result<(), String> {
    if h.h != a.mul(&h.u) {
        return Err("H != A U".into());
    }
    if !det(&h.u).abs().is_one() {
        return Err(format!("U is not unimodular, det = {}", det(&h.u)));
    }
    for (k, &(row, col)) in h.pivots.iter().enumerate() {
        if col != k {
            return Err("pivot columns out of order".into());
        }
        if !h.h.get(row, col).is_positive() {
            return Err("pivot not positive".into());
        }
        for r in 0..row {
            if !h.h.get(r, col).is_zero() {
                return Err("entry above a pivot".into());
            }
        }
        for c in 0..col {
            let e = h.h.get(row, c);
            if e.is_negative() || e >= h.h.get(row, col) {
                return Err("entry left of a pivot not reduced".into());
            }
        }
        if k > 0 && row <= h.pivots[k - 1].0 {
            return Err("pivot rows not increasing".into());
        }
    }
    for c in h.rank()..h.h.cols() {
        if (0..h.h.rows()).any(|r| !h.h.get(r, c).is_zero()) {
            return Err("nonzero column past the rank".into());
        }
    }
    Ok(())
}
