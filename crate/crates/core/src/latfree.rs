//! Lattice-free convex sets: detection, maximality certificates and maximalization.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{QVector, Scalar};
use crate::lattice::{
    enumerate_points, is_lattice_subspace, lattice_in_subspace, lattice_subspace_basis,
    quotient_lattice, BoxRegion, Lattice, Mode, Region,
};
use crate::lp::{solve_lp, LinearProgram, LpOutcome};
use crate::polyhedron::{AffineSubspace, HPolyhedron, Inequality};

/// What the interior search looked at.
#[derive(Clone, Debug)]
pub struct InteriorRecord {
    /// Representatives of the lattice modulo the lineality space.
    pub quotient: Lattice,
    /// Lineality space of the searched region.
    pub lineality: Vec<QVector>,
    /// The region searched: the body with every row that is not an equality
    /// on the recession cone dropped.
    pub region: HPolyhedron,
    /// Interior representatives found, in lexicographic order.
    pub interior_points: Vec<QVector>,
}

/// Result of [`is_lattice_free`].
#[derive(Clone, Debug)]
pub struct Freeness {
    pub lattice_free: bool,
    /// The lexicographically first interior point found, if any.
    pub witness: Option<QVector>,
    /// `None` when the body or its ambient meets no lattice point.
    pub record: Option<InteriorRecord>,
}

/// Tests whether the relative interior of `s` (within `s.ambient`) misses the lattice.
///
/// Rows that are not equalities on the recession cone are dropped first; the
/// result is lattice-free iff `s` is. The lineality space of what remains
/// must be a lattice subspace, otherwise `UnsupportedShape` is returned.
pub fn is_lattice_free(s: &HPolyhedron, lattice: &Lattice) -> Result<Freeness> {
    check_dims(s.ambient_dim(), lattice)?;
    let free = Freeness {
        lattice_free: true,
        witness: None,
        record: None,
    };
    let Some(lw) = lattice_in_subspace(lattice, &s.ambient)? else {
        return Ok(free);
    };
    let section = HPolyhedron::new(lw.affine_hull(), s.inequalities.clone())?;
    if section.is_empty() {
        return Ok(free);
    }
    let kept = section.recession_implicit();
    let region = HPolyhedron::new(
        section.ambient.clone(),
        kept.iter().map(|&i| section.inequalities[i].clone()).collect(),
    )?;
    let lineality = region.lineality();
    if !lineality.is_empty() && !is_lattice_subspace(&lw, &lineality)? {
        return Err(Error::UnsupportedShape(
            "lineality space of the closed body is not a lattice subspace".into(),
        ));
    }
    let quotient = quotient_lattice(&lw, &lineality)?;
    let interior_points = enumerate_points(&quotient, Region::Polyhedron(&region), Mode::Interior)?;
    let witness = match interior_points.first() {
        None => None,
        Some(y) if kept.len() == section.inequalities.len() => Some(y.clone()),
        Some(y) => {
            let dropped: Vec<&Inequality> = (0..section.inequalities.len())
                .filter(|i| !kept.contains(i))
                .map(|i| &section.inequalities[i])
                .collect();
            Some(lift_into_body(&lw, &lineality, &dropped, y)?)
        }
    };
    Ok(Freeness {
        lattice_free: witness.is_none(),
        witness,
        record: Some(InteriorRecord {
            quotient,
            lineality,
            region,
            interior_points,
        }),
    })
}

fn check_dims(n: usize, lattice: &Lattice) -> Result<()> {
    if lattice.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "lattice lives in dimension {}, body in {n}",
            lattice.ambient_dim()
        )));
    }
    Ok(())
}

/// Pushes the interior point `y` of the closed body along an integral
/// lineality direction until it satisfies the dropped rows strictly.
fn lift_into_body(lw: &Lattice, lineality: &[QVector], dropped: &[&Inequality], y: &QVector) -> Result<QVector> {
    let basis = lattice_subspace_basis(lw, lineality)?;
    let p = basis.len();
    // Coefficients v with a_j . (sum v_i m_i) <= -1 on every dropped row.
    let mut lp = LinearProgram::new(p).minimize(QVector::zeros(p));
    let rows: Vec<QVector> = dropped
        .iter()
        .map(|h| basis.iter().map(|m| h.normal.dot(m)).collect())
        .collect();
    for row in &rows {
        lp.le(row.clone(), -Scalar::one());
    }
    let LpOutcome::Optimal { x: v, .. } = solve_lp(&lp) else {
        return Err(Error::UnsupportedShape("no recession direction leaves the dropped rows".into()));
    };
    // Scale before rounding so the rounding error cannot flip a sign.
    let mut k = Scalar::one();
    for row in &rows {
        let spread: Scalar = row.iter().map(Scalar::abs).sum();
        let need = &spread / &Scalar::from_int(2) + Scalar::one();
        if need > k {
            k = need;
        }
    }
    let k = Scalar::from_bigint(k.ceil());
    let coeffs: Vec<BigInt> = v.iter().map(|c| (&k * c).round()).collect();
    let mut r = QVector::zeros(lw.ambient_dim());
    for (c, m) in coeffs.iter().zip(&basis) {
        r = r.axpy(&Scalar::from_bigint(c.clone()), m);
    }
    let mut t = BigInt::from(0);
    for h in dropped {
        let slope = h.normal.dot(&r);
        debug_assert!(slope.is_negative());
        // Need a.y + t a.r < b.
        let excess = &h.normal.dot(y) - &h.rhs;
        let q = (&excess / &(-&slope)).floor() + 1;
        if q > t {
            t = q;
        }
    }
    Ok(y.axpy(&Scalar::from_bigint(t), &r))
}

/// A facet of the body with a lattice point in the relative interior of its
/// trace on the integral hull.
#[derive(Clone, Debug)]
pub struct FacetWitness {
    pub inequality: Inequality,
    pub witness: QVector,
}

/// Evidence for a full-dimensional polyhedral maximal body.
#[derive(Clone, Debug)]
pub struct PolyhedralCertificate {
    /// The body in canonical form.
    pub body: HPolyhedron,
    /// The body intersected with the affine hull of the lattice points in `W`.
    pub section: HPolyhedron,
    /// Lattice basis of the lineality space of the section.
    pub lineality: Vec<QVector>,
    pub dim_polytope: usize,
    pub dim_lineality: usize,
    pub dim_hull: usize,
    pub facets: Vec<FacetWitness>,
    pub interior: InteriorRecord,
}

#[derive(Clone, Debug)]
pub enum MaximalityCertificate {
    Polyhedral(PolyhedralCertificate),
    /// A hyperplane of `W` whose trace on the integral hull has a direction
    /// space that is not a lattice subspace.
    Hyperplane {
        hyperplane: AffineSubspace,
        directions: Vec<QVector>,
    },
    /// A half-space of `W` with the integral hull on its boundary.
    HalfSpace { inequality: Inequality },
}

impl MaximalityCertificate {
    pub fn case_name(&self) -> &'static str {
        match self {
            MaximalityCertificate::Polyhedral(_) => "polyhedral",
            MaximalityCertificate::Hyperplane { .. } => "hyperplane",
            MaximalityCertificate::HalfSpace { .. } => "half-space",
        }
    }
}

/// Why a body is not maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// A lattice point in the interior.
    InteriorPoint(QVector),
    /// A facet whose trace on the integral hull has no lattice point in its
    /// relative interior.
    FacetWithoutWitness(Inequality),
    /// A facet that does not induce its own facet on the integral hull.
    FacetMismatch(Inequality),
    /// The hyperplane's direction space meets the hull in a lattice subspace.
    LatticeSubspace(Vec<QVector>),
    /// The integral hull lies inside the hyperplane.
    HullInsideHyperplane,
    /// The body misses the integral hull.
    SeparatedFromIntegralHull,
    /// Lower-dimensional body that is not a hyperplane, or a body whose trace
    /// on the integral hull is lower-dimensional.
    LowDimensional,
    /// The trace on the integral hull is unbounded modulo its lineality.
    RecessionNotLineality,
    /// The lineality space of the trace is not a lattice subspace.
    IrrationalLineality(Vec<QVector>),
}

impl std::fmt::Display for Defect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Defect::InteriorPoint(x) => write!(f, "lattice point {x} in the interior"),
            Defect::FacetWithoutWitness(h) => {
                write!(f, "facet `{h}` has no lattice point in its relative interior")
            }
            Defect::FacetMismatch(h) => write!(f, "facet `{h}` does not induce a facet on the integral hull"),
            Defect::LatticeSubspace(b) => {
                write!(f, "direction space meets the hull in a lattice subspace with basis")?;
                for v in b {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
            Defect::HullInsideHyperplane => write!(f, "integral hull lies inside the hyperplane"),
            Defect::SeparatedFromIntegralHull => write!(f, "body misses the integral hull"),
            Defect::LowDimensional => write!(f, "body is lower-dimensional"),
            Defect::RecessionNotLineality => write!(f, "recession cone differs from the lineality space"),
            Defect::IrrationalLineality(_) => write!(f, "lineality space is not a lattice subspace"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Maximal(MaximalityCertificate),
    NotMaximal(Defect),
}

impl Verdict {
    pub fn is_maximal(&self) -> bool {
        matches!(self, Verdict::Maximal(_))
    }
}

/// `s` rewritten as a polyhedron of `w`: equations of `s.ambient` that `w`
/// does not imply become pairs of inequalities.
pub fn body_in(s: &HPolyhedron, w: &AffineSubspace) -> Result<HPolyhedron> {
    if s.ambient_dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch("body and subspace differ in dimension".into()));
    }
    let inside = w.contains(s.ambient.point()) && s.ambient.directions().iter().all(|d| w.contains_direction(d));
    if !inside {
        return Err(Error::PreconditionFailed("body does not lie in the subspace".into()));
    }
    let mut rows = s.inequalities.clone();
    for (a, b) in s.ambient.equations() {
        if !implies(w, a, b) {
            rows.push(Inequality::new(a.clone(), b.clone()));
            rows.push(Inequality::new(a.neg(), -b));
        }
    }
    HPolyhedron::new(w.clone(), rows)
}

fn implies(w: &AffineSubspace, a: &QVector, b: &Scalar) -> bool {
    &a.dot(w.point()) == b && w.directions().iter().all(|d| a.dot(d).is_zero())
}

/// Decides whether `s` is a maximal lattice-free convex set of `w` and
/// returns either a certificate or a defect.
pub fn certify_maximal(s: &HPolyhedron, w: &AffineSubspace, lattice: &Lattice) -> Result<Verdict> {
    check_dims(w.ambient_dim(), lattice)?;
    let body = body_in(s, w)?;
    let lw = lattice_in_subspace(lattice, w)?.ok_or(Error::NoIntegralPoint)?;
    let hull = lw.affine_hull();
    let dim_s = body.dim().ok_or(Error::EmptyBody)?;
    let not = |d| Ok(Verdict::NotMaximal(d));

    if dim_s < w.dim() {
        let canon = body.canonical()?;
        if dim_s + 1 != w.dim() || !canon.inequalities.is_empty() {
            return not(Defect::LowDimensional);
        }
        let plane = canon.ambient;
        if plane.contains(hull.point()) && hull.directions().iter().all(|d| plane.contains_direction(d)) {
            return not(Defect::HullInsideHyperplane);
        }
        let trace = match hull.with_equations(plane.equations()) {
            Ok(t) => t,
            Err(Error::EmptySubspace) => return not(Defect::SeparatedFromIntegralHull),
            Err(e) => return Err(e),
        };
        let directions = trace.directions().to_vec();
        if is_lattice_subspace(&lw, &directions)? {
            return not(Defect::LatticeSubspace(lattice_subspace_basis(&lw, &directions)?));
        }
        return Ok(Verdict::Maximal(MaximalityCertificate::Hyperplane {
            hyperplane: plane,
            directions,
        }));
    }

    let canon = body.canonical()?;
    if let [h] = canon.inequalities.as_slice() {
        let on_boundary =
            h.is_tight(hull.point()) && hull.directions().iter().all(|d| h.normal.dot(d).is_zero());
        if on_boundary {
            return Ok(Verdict::Maximal(MaximalityCertificate::HalfSpace { inequality: h.clone() }));
        }
    }

    let freeness = match is_lattice_free(&canon, &lw) {
        Ok(f) => f,
        Err(Error::UnsupportedShape(_)) => {
            let section = HPolyhedron::new(hull.clone(), canon.inequalities.clone())?;
            return not(Defect::IrrationalLineality(section.lineality()));
        }
        Err(e) => return Err(e),
    };
    if let Some(x) = freeness.witness {
        return not(Defect::InteriorPoint(x));
    }
    let section = HPolyhedron::new(hull.clone(), canon.inequalities.clone())?;
    match section.dim() {
        None => return not(Defect::SeparatedFromIntegralHull),
        Some(d) if d < hull.dim() => return not(Defect::LowDimensional),
        _ => {}
    }
    if !section.recession_is_lineality() {
        return not(Defect::RecessionNotLineality);
    }
    let lineality = section.lineality();
    if !lineality.is_empty() && !is_lattice_subspace(&lw, &lineality)? {
        return not(Defect::IrrationalLineality(lineality));
    }

    for (i, h) in section.inequalities.iter().enumerate() {
        if !irredundant(&section, i) {
            return not(Defect::FacetMismatch(h.clone()));
        }
    }
    let quotient = quotient_lattice(&lw, &lineality)?;
    let mut facets = Vec::new();
    for h in &section.inequalities {
        let face = section.restricted(&[(h.normal.clone(), h.rhs.clone())], &[])?;
        let pts = enumerate_points(&quotient, Region::Polyhedron(&face), Mode::RelativeInterior)?;
        match pts.into_iter().next() {
            Some(witness) => facets.push(FacetWitness {
                inequality: h.clone(),
                witness,
            }),
            None => return not(Defect::FacetWithoutWitness(h.clone())),
        }
    }
    let lattice_basis = if lineality.is_empty() {
        Vec::new()
    } else {
        lattice_subspace_basis(&lw, &lineality)?
    };
    let dim_lineality = lattice_basis.len();
    Ok(Verdict::Maximal(MaximalityCertificate::Polyhedral(PolyhedralCertificate {
        body: canon,
        section,
        lineality: lattice_basis,
        dim_polytope: hull.dim() - dim_lineality,
        dim_lineality,
        dim_hull: hull.dim(),
        facets,
        interior: freeness.record.expect("hull has lattice points"),
    })))
}

/// Row `i` cuts off part of the polyhedron given by the other rows.
fn irredundant(p: &HPolyhedron, i: usize) -> bool {
    let mut others = p.clone();
    let h = others.inequalities.remove(i);
    match others.max_value(&h.normal) {
        Some(v) => v > h.rhs,
        None => true,
    }
}

/// Rows kept by the closure `S + span(rec S)`, computed on the trace in `hull`.
fn close(rows: &mut Vec<(usize, Inequality)>, hull: &AffineSubspace) -> Result<()> {
    let section = HPolyhedron::new(hull.clone(), rows.iter().map(|(_, h)| h.clone()).collect())?;
    if section.is_empty() {
        return Ok(());
    }
    let kept = section.recession_implicit();
    let mut i = 0;
    rows.retain(|_| {
        let keep = kept.contains(&i);
        i += 1;
        keep
    });
    Ok(())
}

fn unsupported(e: Error) -> Error {
    match e {
        Error::UnsupportedShape(_) | Error::NotLatticeSubspace => Error::IrrationalLinealityUnsupported,
        e => e,
    }
}

/// Lattice points of `region` (bounded modulo its lineality) whose
/// coordinates in the quotient lattice stay inside the budget cube.
fn budgeted_points(lw: &Lattice, region: &HPolyhedron, budget: &BoxRegion) -> Result<Vec<QVector>> {
    let lineality = region.lineality();
    let quotient = quotient_lattice(lw, &lineality).map_err(unsupported)?;
    let lo = budget.lower.iter().min().cloned().unwrap_or_else(Scalar::zero);
    let hi = budget.upper.iter().max().cloned().unwrap_or_else(Scalar::zero);
    let pulled = quotient.pullback(region)?;
    for j in 0..quotient.rank() {
        let e = QVector::unit(quotient.rank(), j);
        let (Some(min), Some(max)) = (pulled.min_value(&e), pulled.max_value(&e)) else {
            return Err(Error::BoxTooSmall);
        };
        if min < lo || max > hi {
            return Err(Error::BoxTooSmall);
        }
    }
    enumerate_points(&quotient, Region::Polyhedron(region), Mode::Closed)
}

/// Enlarges a lattice-free polyhedron of `w` to a maximal one by relaxing
/// its rows in order, keeping their normals. Enumeration regions must fit in
/// the budget cube, measured in lattice coordinates.
pub fn maximalize(s: &HPolyhedron, w: &AffineSubspace, lattice: &Lattice, budget: &BoxRegion) -> Result<HPolyhedron> {
    check_dims(w.ambient_dim(), lattice)?;
    let body = body_in(s, w)?;
    let freeness = is_lattice_free(&body, lattice).map_err(unsupported)?;
    if !freeness.lattice_free {
        return Err(Error::NotLatticeFree);
    }
    let Some(lw) = lattice_in_subspace(lattice, w)? else {
        return HPolyhedron::new(w.clone(), Vec::new());
    };
    let hull = lw.affine_hull();
    let mut rows: Vec<(usize, Inequality)> = body.inequalities.into_iter().enumerate().collect();
    close(&mut rows, &hull)?;
    let total = rows.last().map_or(0, |(id, _)| id + 1);
    for id in 0..total {
        let Some(pos) = rows.iter().position(|(j, _)| *j == id) else {
            continue;
        };
        let h = rows[pos].1.clone();
        let others: Vec<Inequality> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != pos)
            .map(|(_, (_, g))| g.clone())
            .collect();
        let relaxed = HPolyhedron::new(hull.clone(), others.clone())?;
        let found = is_lattice_free(&relaxed, &lw).map_err(unsupported)?;
        let Some(z0) = found.witness else {
            rows.remove(pos);
            close(&mut rows, &hull)?;
            continue;
        };
        let cap = Inequality::new(h.normal.clone(), h.normal.dot(&z0));
        let mut region_rows = others.clone();
        region_rows.push(cap);
        let region = HPolyhedron::new(hull.clone(), region_rows)?;
        let best = budgeted_points(&lw, &region, budget)?
            .into_iter()
            .filter(|z| others.iter().all(|g| g.holds_strictly(z)))
            .map(|z| h.normal.dot(&z))
            .min()
            .expect("the witness class is in the region");
        rows[pos].1.rhs = best;
    }
    let out = HPolyhedron::new(w.clone(), rows.into_iter().map(|(_, h)| h).collect())?;
    out.canonical()
}

/// Shapes of maximal lattice-free sets in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape2d {
    Split,
    Triangle,
    Quadrilateral,
}

impl std::fmt::Display for Shape2d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape2d::Split => "split",
            Shape2d::Triangle => "triangle",
            Shape2d::Quadrilateral => "quadrilateral",
        })
    }
}

/// Classifies a certified maximal body of a two-dimensional integral hull.
pub fn classify_2d(b: &HPolyhedron, lattice: &Lattice) -> Result<Shape2d> {
    match certify_maximal(b, &b.ambient, lattice)? {
        Verdict::Maximal(MaximalityCertificate::Polyhedral(c)) if c.dim_hull == 2 => {
            match (c.dim_lineality, c.facets.len()) {
                (1, _) => Ok(Shape2d::Split),
                (0, 3) => Ok(Shape2d::Triangle),
                (0, 4) => Ok(Shape2d::Quadrilateral),
                _ => Err(Error::NotCertified),
            }
        }
        Verdict::Maximal(_) => Err(Error::NotTwoDimensional),
        Verdict::NotMaximal(_) => Err(Error::NotCertified),
    }
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

    fn ineq(a: &str, b: &str) -> Inequality {
        Inequality::new(v(a), s(b))
    }

    fn poly(rows: &[(&str, &str)]) -> HPolyhedron {
        let ineqs: Vec<Inequality> = rows.iter().map(|(a, b)| ineq(a, b)).collect();
        HPolyhedron::new(AffineSubspace::whole(ineqs[0].normal.dim()), ineqs).unwrap()
    }

    fn irrational_triangle() -> HPolyhedron {
        poly(&[("(1, 1)", "2"), ("(-1*sqrt(2), 1)", "1"), ("(0, -1)", "0")])
    }

    fn certificate(verdict: Verdict) -> PolyhedralCertificate {
        match verdict {
            Verdict::Maximal(MaximalityCertificate::Polyhedral(c)) => c,
            other => panic!("expected a polyhedral certificate, got {other:?}"),
        }
    }

    #[test]
    fn split_and_boxes() {
        let z2 = Lattice::integer(2);
        let split = poly(&[("(0, 1)", "1"), ("(0, -1)", "0")]);
        assert!(is_lattice_free(&split, &z2).unwrap().lattice_free);
        let big = HPolyhedron::from_box(&v("(-1/4, -1/4)"), &v("(5/4, 5/4)"));
        let f = is_lattice_free(&big, &z2).unwrap();
        assert_eq!(f.witness, Some(v("(0, 0)")));
        let small = HPolyhedron::from_box(&v("(1/4, 1/4)"), &v("(3/4, 3/4)"));
        assert!(is_lattice_free(&small, &z2).unwrap().lattice_free);
    }

    #[test]
    fn witness_lifted_into_unbounded_body() {
        // The closed body is the whole plane; the witness must satisfy the cone rows.
        let cone = poly(&[("(-1, 0)", "-7/2"), ("(-1, 1)", "-3/2")]);
        let f = is_lattice_free(&cone, &Lattice::integer(2)).unwrap();
        let x = f.witness.unwrap();
        assert!(x.is_integral() && cone.interior_contains(&x));
    }

    #[test]
    fn irrational_triangle_is_certified() {
        let z2 = Lattice::integer(2);
        let t = irrational_triangle();
        assert!(is_lattice_free(&t, &z2).unwrap().lattice_free);
        let c = certificate(certify_maximal(&t, &AffineSubspace::whole(2), &z2).unwrap());
        let ws: Vec<QVector> = c.facets.iter().map(|f| f.witness.clone()).collect();
        assert_eq!(ws, vec![v("(1, 1)"), v("(0, 1)"), v("(0, 0)")]);
        assert_eq!((c.dim_polytope, c.dim_lineality), (2, 0));
        assert_eq!(classify_2d(&t, &z2).unwrap(), Shape2d::Triangle);
    }

    #[test]
    fn triangle_and_square() {
        let z2 = Lattice::integer(2);
        let r2 = AffineSubspace::whole(2);
        let tri = poly(&[("(-1, 0)", "0"), ("(0, -1)", "0"), ("(1, 1)", "2")]);
        let c = certificate(certify_maximal(&tri, &r2, &z2).unwrap());
        let ws: Vec<QVector> = c.facets.iter().map(|f| f.witness.clone()).collect();
        assert_eq!(ws, vec![v("(0, 1)"), v("(1, 0)"), v("(1, 1)")]);
        let square = HPolyhedron::from_box(&v("(0, 0)"), &v("(1, 1)"));
        match certify_maximal(&square, &r2, &z2).unwrap() {
            Verdict::NotMaximal(Defect::FacetWithoutWitness(h)) => assert_eq!(h.pretty(), "x1 <= 1"),
            other => panic!("{other:?}"),
        }
        let split = poly(&[("(0, 1)", "1"), ("(0, -1)", "0")]);
        assert_eq!(classify_2d(&split, &z2).unwrap(), Shape2d::Split);
    }

    #[test]
    fn hyperplane_in_r4() {
        let z4 = Lattice::integer(4);
        let w = AffineSubspace::new(4, vec![(v("(1, 1, 1, 1*sqrt(2))"), s("1"))]).unwrap();
        let plane = w.with_equations(&[(v("(1, 1*sqrt(2), 0, 0)"), s("1"))]).unwrap();
        let body = HPolyhedron::new(plane, Vec::new()).unwrap();
        let verdict = certify_maximal(&body, &w, &z4).unwrap();
        assert!(matches!(verdict, Verdict::Maximal(MaximalityCertificate::Hyperplane { .. })));
        let rational = w.with_equations(&[(v("(1, 0, 0, 0)"), s("0"))]).unwrap();
        let body = HPolyhedron::new(rational, Vec::new()).unwrap();
        assert!(!certify_maximal(&body, &w, &z4).unwrap().is_maximal());
    }

    #[test]
    fn half_space_on_the_hull() {
        let z3 = Lattice::integer(3);
        let w = AffineSubspace::new(3, vec![(v("(0, 1, 1*sqrt(2))"), s("0"))]).unwrap();
        let body = HPolyhedron::new(w.clone(), vec![ineq("(0, 1, 0)", "0")]).unwrap();
        let verdict = certify_maximal(&body, &w, &z3).unwrap();
        assert!(matches!(verdict, Verdict::Maximal(MaximalityCertificate::HalfSpace { .. })));
    }

    #[test]
    fn maximalize_small_box_gives_split() {
        let z2 = Lattice::integer(2);
        let small = HPolyhedron::from_box(&v("(1/4, 1/4)"), &v("(3/4, 3/4)"));
        let budget = BoxRegion::cube(2, -10, 10);
        let b = maximalize(&small, &AffineSubspace::whole(2), &z2, &budget).unwrap();
        let want = poly(&[("(0, 1)", "1"), ("(0, -1)", "0")]);
        assert_eq!(b, want.canonical().unwrap());
        assert!(certify_maximal(&b, &b.ambient, &z2).unwrap().is_maximal());
        let again = maximalize(&b, &AffineSubspace::whole(2), &z2, &budget).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn maximalize_in_irrational_plane() {
        let z3 = Lattice::integer(3);
        let w = AffineSubspace::new(3, vec![(v("(0, 1, 1*sqrt(2))"), s("0"))]).unwrap();
        let body = HPolyhedron::new(w.clone(), vec![ineq("(4, 0, 0)", "3"), ineq("(-4, 0, 0)", "-1")]).unwrap();
        let b = maximalize(&body, &w, &z3, &BoxRegion::cube(3, -10, 10)).unwrap();
        let want = HPolyhedron::new(w.clone(), vec![ineq("(1, 0, 0)", "1"), ineq("(-1, 0, 0)", "0")]).unwrap();
        assert_eq!(b, want.canonical().unwrap());
        assert!(certify_maximal(&b, &w, &z3).unwrap().is_maximal());
    }

    #[test]
    fn maximalize_errors() {
        let z2 = Lattice::integer(2);
        let r2 = AffineSubspace::whole(2);
        let big = HPolyhedron::from_box(&v("(-1/4, -1/4)"), &v("(5/4, 5/4)"));
        assert_eq!(maximalize(&big, &r2, &z2, &BoxRegion::cube(2, -5, 5)), Err(Error::NotLatticeFree));
        let small = HPolyhedron::from_box(&v("(1/4, 1/4)"), &v("(3/4, 3/4)"));
        assert_eq!(maximalize(&small, &r2, &z2, &BoxRegion::cube(2, 0, 0)), Err(Error::BoxTooSmall));
        let irr = poly(&[("(1, 1*sqrt(2))", "1/2"), ("(-1, -1*sqrt(2))", "0")]);
        assert_eq!(maximalize(&irr, &r2, &z2, &BoxRegion::cube(2, -5, 5)), Err(Error::IrrationalLinealityUnsupported));
    }
}
