mod support;

use latcut_core::lp::{solve_lp, LinearProgram, LpOutcome};
use latcut_core::QVector;
use support::{brute_force_lp, random_lp, rng, s, v, Brute};

fn agree(lp: &LinearProgram) {
    let got = solve_lp(lp);
    assert!(got.verify(lp), "certificate fails for {lp:?}: {got:?}");
    let want = brute_force_lp(lp);
    match (&got, &want) {
        (LpOutcome::Optimal { value, .. }, Brute::Optimal(w)) => assert_eq!(value, w, "{lp:?}"),
        (LpOutcome::Infeasible { .. }, Brute::Infeasible) | (LpOutcome::Unbounded { .. }, Brute::Unbounded) => {}
        _ => panic!("solver says {got:?}, enumeration says {want:?} for {lp:?}"),
    }
}

#[test]
fn random_programs_match_enumeration() {
    let mut r = rng(2024);
    let mut seen = [0usize; 3];
    for _ in 0..200 {
        let lp = random_lp(&mut r);
        agree(&lp);
        match brute_force_lp(&lp) {
            Brute::Optimal(_) => seen[0] += 1,
            Brute::Infeasible => seen[1] += 1,
            Brute::Unbounded => seen[2] += 1,
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "outcome mix {seen:?}");
}

#[test]
fn irrational_objective() {
    let mut lp = LinearProgram::new(2).minimize(v("(1*sqrt(2), -1)"));
    lp.nonnegative(0);
    lp.nonnegative(1);
    lp.le(v("(-1, 1)"), s("1"));
    lp.le(v("(1, 1)"), s("3"));
    agree(&lp);
    assert_eq!(solve_lp(&lp).value(), Some(&s("-1")));
}

#[test]
fn degenerate_vertex() {
    // Several rows meet at the optimum; Bland's rule must still stop.
    let mut lp = LinearProgram::new(3).minimize(v("(-1, -1, -1)"));
    for j in 0..3 {
        lp.nonnegative(j);
    }
    lp.le(v("(1, 1, 0)"), s("1"));
    lp.le(v("(1, 0, 1)"), s("1"));
    lp.le(v("(0, 1, 1)"), s("1"));
    lp.le(v("(1, 1, 1)"), s("3/2"));
    lp.le(v("(2, 2, 2)"), s("3"));
    agree(&lp);
    assert_eq!(solve_lp(&lp).point().map(QVector::dim), Some(3));
}
