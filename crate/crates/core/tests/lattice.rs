mod support;

use latcut_core::lattice::{
    dirichlet_approx, enumerate_points, hnf, integral_affine_hull, is_lattice_subspace, point_near_subspace, project_lattice, BoxRegion,
    IntMatrix, Lattice, Mode, Region,
};
use latcut_core::polyhedron::{AffineSubspace, HPolyhedron};
use latcut_core::{QVector, Scalar};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use support::{check_hnf, columns_in_lattice, det, int_matrix, quad, rng, s, v};

#[test]
fn hnf_on_random_square_matrices() {
    let mut r = rng(7);
    for n in [2, 3] {
        for _ in 0..100 {
            let a = int_matrix(&mut r, n, 9);
            let h = hnf(&a);
            check_hnf(&a, &h).unwrap_or_else(|e| panic!("{a:?}: {e}"));
            if !det(&a).is_zero() {
                assert!(columns_in_lattice(&a, &h.h) && columns_in_lattice(&h.h, &a));
                let pivots: BigInt = h.pivots.iter().map(|&(i, j)| h.h.get(i, j).clone()).product();
                assert_eq!(pivots, num_traits::Signed::abs(&det(&a)));
            }
        }
    }
}

#[test]
fn hnf_example_generates_same_lattice() {
    let a = IntMatrix::from_i64(&[&[2, 4], &[1, 3]]);
    let h = hnf(&a);
    check_hnf(&a, &h).unwrap();
    assert!(columns_in_lattice(&a, &h.h) && columns_in_lattice(&h.h, &a));
}

/// Lattice points of `lattice` in `region` by walking generator coefficients.
fn naive(lattice: &Lattice, area: &BoxRegion, reach: i64) -> Vec<QVector> {
    let m = lattice.rank();
    let mut out = Vec::new();
    let mut y = vec![-reach; m];
    loop {
        let big: Vec<BigInt> = y.iter().map(|&c| BigInt::from(c)).collect();
        let p = lattice.point(&big);
        if area.contains(&p) {
            out.push(p);
        }
        let mut k = 0;
        while k < m && y[k] == reach {
            y[k] = -reach;
            k += 1;
        }
        if k == m {
            break;
        }
        y[k] += 1;
    }
    out.sort();
    out
}

#[test]
fn enumeration_matches_naive_walk() {
    let mut r = rng(11);
    for _ in 0..40 {
        // Unimodular-ish small generators keep the naive walk short.
        let g1 = QVector::from_ints(&[r.gen_range(1..=2), r.gen_range(-1..=1)]);
        let g2 = QVector::from_ints(&[r.gen_range(-1..=1), r.gen_range(1..=2)]);
        if (&g1[0] * &g2[1] - &g1[1] * &g2[0]).is_zero() {
            continue;
        }
        let origin = QVector(vec![Scalar::ratio(r.gen_range(0..3), 3), Scalar::ratio(r.gen_range(0..2), 2)]);
        let lattice = Lattice::affine(origin, vec![g1, g2]).unwrap();
        let area = BoxRegion::cube(2, -3, 3);
        let got = enumerate_points(&lattice, Region::Box(&area), Mode::Closed).unwrap();
        assert_eq!(got, naive(&lattice, &area, 12));
    }
}

#[test]
fn enumeration_matches_triple_loop() {
    let mut r = rng(12);
    let z3 = Lattice::integer(3);
    for _ in 0..20 {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for _ in 0..3 {
            let a = r.gen_range(-6..=6);
            let b = r.gen_range(-6..=6);
            lo.push(Scalar::ratio(2 * a.min(b) - 1, 2));
            hi.push(Scalar::ratio(2 * a.max(b) + r.gen_range(0..=1), 2));
        }
        let area = BoxRegion::new(QVector(lo), QVector(hi)).unwrap();
        let got = enumerate_points(&z3, Region::Box(&area), Mode::Closed).unwrap();
        let mut want = Vec::new();
        for x in -7..=7 {
            for y in -7..=7 {
                for z in -7..=7 {
                    let p = QVector::from_ints(&[x, y, z]);
                    if area.contains(&p) {
                        want.push(p);
                    }
                }
            }
        }
        want.sort();
        assert_eq!(got, want);
    }
}

#[test]
fn projected_lattice_generators() {
    let lat = Lattice::new(3, vec![v("(1, 0, 0)"), v("(1, 2, 0)"), v("(0, 1, 3)")]).unwrap();
    let l = vec![v("(1, 0, 0)")];
    let proj = project_lattice(&lat, &l).unwrap();
    let gens = proj.generators();
    assert_eq!(latcut_core::field::rank_of(gens, 3), gens.len());
    let drop_first = |x: &QVector| QVector(vec![Scalar::zero(), x[1].clone(), x[2].clone()]);
    for g in lat.generators() {
        assert!(proj.contains(&drop_first(g)), "{g} projects outside");
    }
    for g in gens {
        assert!(g[0].is_zero());
        // Some lattice point has this projection.
        let hit = enumerate_points(&lat, Region::Box(&BoxRegion::cube(3, -6, 6)), Mode::Closed)
            .unwrap()
            .iter()
            .any(|p| &drop_first(p) == g);
        assert!(hit, "{g}");
    }
}

#[test]
fn interior_mode_drops_boundary() {
    let z2 = Lattice::integer(2);
    let square = HPolyhedron::from_box(&v("(0, 0)"), &v("(2, 2)"));
    let closed = enumerate_points(&z2, Region::Polyhedron(&square), Mode::Closed).unwrap();
    let inner = enumerate_points(&z2, Region::Polyhedron(&square), Mode::Interior).unwrap();
    assert_eq!(closed.len(), 9);
    assert_eq!(inner, vec![v("(1, 1)")]);
    for p in &closed {
        assert_eq!(inner.contains(p), square.interior_contains(p));
    }
}

#[test]
fn dirichlet_inequality_on_random_targets() {
    let mut r = rng(3);
    for _ in 0..50 {
        let n = r.gen_range(1..=2);
        let alpha = QVector((0..n).map(|_| quad(&mut r, 5, 4)).collect());
        let eps = Scalar::ratio(1, r.gen_range(2..=6));
        let (p, q) = dirichlet_approx(&alpha, &eps).unwrap();
        let qs = Scalar::from_bigint(q.clone());
        assert!(q >= BigInt::from(1));
        let mut bound = Scalar::one();
        for _ in 0..n {
            bound = &bound / &eps;
        }
        assert!(qs <= Scalar::from_bigint(bound.ceil()));
        for (a, pi) in alpha.iter().zip(&p) {
            assert!((&(&qs * a) - &Scalar::from_bigint(pi.clone())).abs() < eps);
        }
    }
}

#[test]
fn point_near_irrational_line() {
    let z2 = Lattice::integer(2);
    let l = vec![v("(1, 1*sqrt(2))")];
    assert!(!is_lattice_subspace(&z2, &l).unwrap());
    let eps = s("1/10");
    let z = point_near_subspace(&z2, &l, &eps, &s("10")).unwrap();
    assert!(z.is_integral() && !z.is_zero());
    // Squared distance to span{(1, sqrt 2)} is (z2 - sqrt2 z1)^2 / 3.
    let off = &z[1] - &(&z[0] * &s("1*sqrt(2)"));
    let d2 = &(&off * &off) / &s("3");
    assert!(d2 < &eps * &eps && !d2.is_zero());
    let reference = &s("7") - &s("5*sqrt(2)");
    assert!(&off.abs() * &off.abs() <= &reference * &reference);
}

#[test]
fn integral_hull_properties() {
    let w = AffineSubspace::new(3, vec![(v("(0, 1, 1*sqrt(2))"), s("0"))]).unwrap();
    let hull = integral_affine_hull(&w).unwrap();
    assert!(hull.point.is_integral() && w.contains(&hull.point));
    for g in hull.lattice.generators() {
        assert!(g.is_integral() && w.contains_direction(g));
    }
    // Integral points of W from a brute-force box all lie in x0 + lattice.
    for x in -4..=4 {
        for y in -4..=4 {
            for z in -4..=4 {
                let p = QVector::from_ints(&[x, y, z]);
                if w.contains(&p) {
                    assert!(hull.lattice.contains(&p), "{p}");
                    for (c, d) in hull.c_rows().iter().zip(hull.d().iter()) {
                        assert_eq!(&c.dot(&p), d);
                    }
                }
            }
        }
    }
    let w2 = AffineSubspace::new(3, vec![(v("(1, 1, 1)"), s("1")), (v("(1, 1*sqrt(2), 0)"), s("1"))]).unwrap();
    let hull2 = integral_affine_hull(&w2).unwrap();
    assert_eq!(hull2.point, v("(1, 0, 0)"));
    assert_eq!(hull2.lattice.rank(), 0);
}

proptest! {
    #[test]
    fn rational_spans_of_integer_vectors_are_lattice_subspaces(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5) {
        let z3 = Lattice::integer(3);
        let u = QVector::from_ints(&[a, b, c]);
        prop_assume!(!u.is_zero());
        prop_assert!(is_lattice_subspace(&z3, std::slice::from_ref(&u)).unwrap());
        let twisted = QVector(vec![Scalar::from_int(a), Scalar::from_int(b), &Scalar::from_int(c) + &s("1*sqrt(2)")]);
        // Rescaling cannot make it rational unless it lies on an axis.
        prop_assert_eq!(is_lattice_subspace(&z3, &[twisted]).unwrap(), a == 0 && b == 0);
    }
}
