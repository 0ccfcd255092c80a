use latcut_core::field::{parse_scalar, rational_split, solve_linear, LinearSolution};
use latcut_core::{QMatrix, QVector, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn quad(a: (i64, i64), b: (i64, i64)) -> Scalar {
    Scalar::quadratic(rat(a.0, a.1), rat(b.0, b.1), 2).unwrap()
}

fn part() -> impl Strategy<Value = (i64, i64)> {
    (-30i64..=30, 1i64..=12)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (part(), part()).prop_map(|(a, b)| quad(a, b))
}

/// Sign of `a + b sqrt(2)` from squares only.
fn sign_by_squares(a: &BigRational, b: &BigRational) -> i8 {
    let two = rat(2, 1);
    let sa = a.signum();
    let sb = b.signum();
    if sb.is_zero() {
        return if sa.is_zero() { 0 } else if sa.is_positive() { 1 } else { -1 };
    }
    if sa.is_zero() || sa == sb {
        return if sb.is_positive() { 1 } else { -1 };
    }
    // Opposite signs: the larger square wins.
    let lhs = a * a;
    let rhs = &two * b * b;
    let a_wins = lhs > rhs;
    match (a_wins, sa.is_positive()) {
        (true, true) | (false, false) => 1,
        _ => -1,
    }
}

proptest! {
    #[test]
    fn ring_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, Scalar::zero());
    }

    #[test]
    fn inverses(x in scalar()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.recip(), Scalar::one());
        prop_assert_eq!(&x / &x, Scalar::one());
    }

    #[test]
    fn sign_matches_squares(a in part(), b in part()) {
        let x = quad(a, b);
        prop_assert_eq!(x.sign(), sign_by_squares(x.rat(), x.irr()));
    }

    #[test]
    fn sign_is_multiplicative(x in scalar(), y in scalar()) {
        prop_assert_eq!(x.sign(), -(-&x).sign());
        prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
    }

    #[test]
    fn split_recombines(xs in proptest::collection::vec(scalar(), 1..5)) {
        let v = QVector(xs);
        let (u, w) = rational_split(&v);
        let back: Vec<Scalar> = u
            .into_iter()
            .zip(w)
            .map(|(a, b)| Scalar::quadratic(a, b, 2).unwrap())
            .collect();
        prop_assert_eq!(QVector(back), v);
    }

    #[test]
    fn order_is_compatible(x in scalar(), y in scalar(), z in scalar()) {
        if x <= y {
            prop_assert!(&x + &z <= &y + &z);
        }
        prop_assert_eq!(x < y, (&y - &x).is_positive());
    }

    #[test]
    fn floor_brackets(x in scalar()) {
        let f = Scalar::from_bigint(x.floor());
        prop_assert!(f <= x);
        prop_assert!(x < &f + &Scalar::one());
        prop_assert_eq!(x.ceil(), -((-&x).floor()));
    }

    #[test]
    fn text_round_trip(x in scalar()) {
        prop_assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn solve_then_substitute(
        entries in proptest::collection::vec(-6i64..=6, 9),
        rhs in proptest::collection::vec(-6i64..=6, 3),
        twist in part(),
    ) {
        let t = quad((0, 1), twist);
        let rows: Vec<QVector> = entries
            .chunks(3)
            .map(|c| QVector(c.iter().map(|&e| &Scalar::from_int(e) + &t).collect()))
            .collect();
        let a = QMatrix::from_rows(&rows, 3);
        let b = QVector::from_ints(&rhs);
        match solve_linear(&a, &b).unwrap() {
            LinearSolution::Unique(x) => prop_assert_eq!(a.mul_vec(&x), b),
            LinearSolution::Affine { particular, kernel } => {
                prop_assert_eq!(a.mul_vec(&particular), b);
                for k in &kernel {
                    prop_assert!(a.mul_vec(k).is_zero());
                }
            }
            LinearSolution::Inconsistent => {
                // A left-kernel vector y with y.A = 0 and y.b != 0 exists.
                let at = a.transpose();
                let ys = latcut_core::field::kernel_basis(&at);
                prop_assert!(ys.iter().any(|y| !y.dot(&b).is_zero()));
            }
        }
    }
}

#[test]
fn grammar_examples() {
    assert_eq!(parse_scalar("3/2-1/3*sqrt(2)").unwrap(), quad((3, 2), (-1, 3)));
    assert_eq!(parse_scalar("-1/3*sqrt(2)").unwrap(), quad((0, 1), (-1, 3)));
    assert_eq!(parse_scalar("1-1/2*sqrt(2)").unwrap(), quad((1, 1), (-1, 2)));
    assert!(parse_scalar("1/0").is_err());
    assert!(parse_scalar("1+*sqrt(2)").is_err());
}
