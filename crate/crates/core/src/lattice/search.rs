use num_bigint::BigInt;
use num_traits::One;

use super::{enumerate_points, is_lattice_subspace, BoxRegion, Lattice, Mode, Region};
use crate::error::{Error, Result};
use crate::field::{Projector, QVector, Scalar};

/// Smallest `q >= 1` (up to `ceil(eps^-n)`) with `|q alpha_i - p_i| < eps` for
/// all `i`, where `p_i` is the integer nearest to `q alpha_i`.
pub fn dirichlet_approx(alpha: &QVector, eps: &Scalar) -> Result<(Vec<BigInt>, BigInt)> {
    if !eps.is_positive() || eps >= &Scalar::one() {
        return Err(Error::PreconditionFailed("epsilon must lie in (0, 1)".into()));
    }
    let inv = eps.recip();
    let mut power = Scalar::one();
    for _ in 0..alpha.dim() {
        power = &power * &inv;
    }
    let limit = power.ceil();
    let mut q = BigInt::one();
    while q <= limit {
        let qs = Scalar::from_bigint(q.clone());
        let mut p = Vec::with_capacity(alpha.dim());
        let mut ok = true;
        for a in alpha.iter() {
            let qa = &qs * a;
            let pi = qa.round();
            if (&qa - &Scalar::from_bigint(pi.clone())).abs() >= *eps {
                ok = false;
                break;
            }
            p.push(pi);
        }
        if ok {
            return Ok((p, q));
        }
        q += BigInt::one();
    }
    Err(Error::SearchExhausted(format!("no q <= {limit} satisfies the bound")))
}

/// `true` when the first nonzero entry is negative.
fn leads_negative(v: &QVector) -> bool {
    v.leading().is_some_and(|i| v[i].is_negative())
}

/// A lattice point other than `y` within distance `eps` of the half-line
/// `{y + t r : t >= t_min}`, searched among lattice points `z` with
/// `|z - y|_inf <= bound`. The closest hit wins; ties go to the smallest `t`,
/// then lexicographic order.
pub fn point_near_halfline(
    lattice: &Lattice,
    y: &QVector,
    r: &QVector,
    eps: &Scalar,
    t_min: &Scalar,
    bound: &Scalar,
) -> Result<QVector> {
    if !lattice.contains(y) {
        return Err(Error::PreconditionFailed("start point is not a lattice point".into()));
    }
    if r.is_zero() || lattice.direction_coordinates(r).is_none() {
        return Err(Error::PreconditionFailed("direction must be nonzero and in the lattice span".into()));
    }
    if !eps.is_positive() || t_min.is_negative() {
        return Err(Error::PreconditionFailed("need eps > 0 and t_min >= 0".into()));
    }
    let eps2 = eps * eps;
    let rr = r.norm_sq();
    let area = BoxRegion::around(y, bound);
    let mut best: Option<(Scalar, Scalar, QVector)> = None;
    for z in enumerate_points(lattice, Region::Box(&area), Mode::Closed)? {
        if &z == y {
            continue;
        }
        let d = z.sub(y);
        let t = (&d.dot(r) / &rr).max(t_min.clone());
        let dist2 = d.axpy(&-&t, r).norm_sq();
        if dist2 >= eps2 {
            continue;
        }
        let key = (dist2, t, z);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.map(|(_, _, z)| z)
        .ok_or_else(|| Error::SearchExhausted(format!("no lattice point near the half-line within bound {bound}")))
}

/// A lattice point outside the subspace `span(l)` within distance `eps` of
/// it, searched among points with `|z - origin|_inf <= bound`. The closest
/// hit wins; ties go to the shortest, then to the sign whose first nonzero
/// entry is positive, then lexicographic order.
pub fn point_near_subspace(lattice: &Lattice, l: &[QVector], eps: &Scalar, bound: &Scalar) -> Result<QVector> {
    if is_lattice_subspace(lattice, l)? {
        return Err(Error::IsLatticeSubspace);
    }
    if !eps.is_positive() {
        return Err(Error::PreconditionFailed("need eps > 0".into()));
    }
    let proj = Projector::new(l, lattice.ambient_dim());
    let eps2 = eps * eps;
    let area = BoxRegion::around(lattice.origin(), bound);
    let mut best: Option<(Scalar, Scalar, bool, QVector)> = None;
    for z in enumerate_points(lattice, Region::Box(&area), Mode::Closed)? {
        let off = proj.reject(&z);
        let dist2 = off.norm_sq();
        if dist2.is_zero() || dist2 >= eps2 {
            continue;
        }
        let key = (dist2, z.norm_sq(), leads_negative(&z), z);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.map(|(_, _, _, z)| z)
        .ok_or_else(|| Error::SearchExhausted(format!("no lattice point near the subspace within bound {bound}")))
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
    fn dirichlet_examples() {
        let (p, q) = dirichlet_approx(&v("(1*sqrt(2))"), &s("1/2")).unwrap();
        assert_eq!((p, q), (vec![BigInt::from(1)], BigInt::from(1)));
        let (p, q) = dirichlet_approx(&v("(1*sqrt(2))"), &s("1/5")).unwrap();
        assert_eq!((p, q), (vec![BigInt::from(3)], BigInt::from(2)));
        let (p, q) = dirichlet_approx(&v("(3, -2)"), &s("1/7")).unwrap();
        assert_eq!((p, q), (vec![BigInt::from(3), BigInt::from(-2)], BigInt::from(1)));
        assert!(dirichlet_approx(&v("(1)"), &s("1")).is_err());
    }

    #[test]
    fn halfline_examples() {
        let z2 = Lattice::integer(2);
        let ten = s("10");
        let got = point_near_halfline(&z2, &v("(0, 0)"), &v("(1, 0)"), &s("1/10"), &s("1"), &ten).unwrap();
        assert_eq!(got, v("(1, 0)"));
        let r = v("(1, 1*sqrt(2))");
        let got = point_near_halfline(&z2, &v("(0, 0)"), &r, &s("1/10"), &s("0"), &ten).unwrap();
        assert_eq!(got, v("(5, 7)"));
        let got = point_near_halfline(&z2, &v("(1, 1)"), &r, &s("1/10"), &s("0"), &ten).unwrap();
        assert_eq!(got, v("(6, 8)"));
        assert!(matches!(
            point_near_halfline(&z2, &v("(0, 0)"), &r, &s("1/100"), &s("0"), &s("3")),
            Err(Error::SearchExhausted(_))
        ));
    }

    #[test]
    fn subspace_examples() {
        let ten = s("10");
        let got = point_near_subspace(&Lattice::integer(2), &[v("(1, 1*sqrt(2))")], &s("1/10"), &ten).unwrap();
        assert_eq!(got, v("(5, 7)"));
        assert_eq!(
            point_near_subspace(&Lattice::integer(2), &[v("(1, 2)")], &s("1/10"), &ten),
            Err(Error::IsLatticeSubspace)
        );
        let got =
            point_near_subspace(&Lattice::integer(3), &[v("(1, 1*sqrt(2), 0)")], &s("1/10"), &ten).unwrap();
        assert_eq!(got, v("(5, 7, 0)"));
    }
}
