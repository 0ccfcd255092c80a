//! Gauge functions, intersection cuts for corner instances, and the
//! machinery that turns a valid inequality into a minimal one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{solve_linear, LinearSolution, QMatrix, QVector, Scalar};
use crate::latfree::{certify_maximal, maximalize, MaximalityCertificate, Verdict};
use crate::lattice::{
    enumerate_points, integral_affine_hull, lattice_in_subspace, lattice_subspace_basis, BoxRegion,
    Lattice, Mode, Region,
};
use crate::lp::{solve_lp, LinearProgram, LpOutcome};
use crate::polyhedron::{linear_form_in, AffineSubspace, HPolyhedron, Inequality};

/// `psi(r) = max_i a_i . r` on the linear space `W`, anchored at `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFunction {
    pub anchor: QVector,
    /// The linear space `W`.
    pub subspace: AffineSubspace,
    pub normals: Vec<QVector>,
}

impl GaugeFunction {
    pub fn new(anchor: QVector, subspace: AffineSubspace, normals: Vec<QVector>) -> Result<Self> {
        let n = anchor.dim();
        if subspace.ambient_dim() != n || normals.iter().any(|a| a.dim() != n) {
            return Err(Error::DimensionMismatch("gauge data differ in dimension".into()));
        }
        if !subspace.contains(&QVector::zeros(n)) {
            return Err(Error::PreconditionFailed("gauge subspace must be linear".into()));
        }
        Ok(GaugeFunction {
            anchor,
            subspace,
            normals,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.anchor.dim()
    }

    /// `f + W`.
    pub fn affine_space(&self) -> AffineSubspace {
        self.subspace.through(&self.anchor)
    }

    /// The linear forms, with an empty list read as the zero function.
    fn forms(&self) -> Vec<QVector> {
        if self.normals.is_empty() {
            vec![QVector::zeros(self.ambient_dim())]
        } else {
            self.normals.clone()
        }
    }

    pub fn scaled(&self, rho: &Scalar) -> GaugeFunction {
        GaugeFunction {
            normals: self.normals.iter().map(|a| a.scale(rho)).collect(),
            ..self.clone()
        }
    }

    /// `psi(r) + lambda^T C r`.
    pub fn shifted(&self, c: &[QVector], lambda: &[Scalar]) -> GaugeFunction {
        let shift = combination(c, lambda, self.ambient_dim());
        GaugeFunction {
            normals: self.forms().iter().map(|a| a.add(&shift)).collect(),
            ..self.clone()
        }
    }

    fn equation_rows(&self) -> Vec<QVector> {
        self.subspace.equations().iter().map(|(g, _)| g.clone()).collect()
    }
}

impl std::fmt::Display for GaugeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "max{{")?;
        for (i, a) in self.forms().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", linear_form_in(a, "r"))?;
        }
        write!(f, "}}")
    }
}

fn combination(rows: &[QVector], coeffs: &[Scalar], n: usize) -> QVector {
    let mut out = QVector::zeros(n);
    for (r, c) in rows.iter().zip(coeffs) {
        out = out.axpy(c, r);
    }
    out
}

/// The gauge of `b` at `f`: each row rescaled to `a_i (x - f) <= 1`.
pub fn gauge_from_body(b: &HPolyhedron, f: &QVector) -> Result<GaugeFunction> {
    if f.dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch("anchor and body differ in dimension".into()));
    }
    if !b.ambient.contains(f) || !b.inequalities.iter().all(|h| h.holds_strictly(f)) {
        return Err(Error::AnchorNotInterior);
    }
    let canon = b.canonical()?;
    let normals = canon
        .inequalities
        .iter()
        .map(|h| h.normal.scale(&h.slack(f).recip()))
        .collect();
    GaugeFunction::new(f.clone(), canon.ambient.linear_part(), normals)
}

pub fn eval_gauge(psi: &GaugeFunction, r: &QVector) -> Scalar {
    psi.forms()
        .iter()
        .map(|a| a.dot(r))
        .max()
        .expect("at least one form")
}

/// `{x in f + W : a_i (x - f) <= alpha}`.
pub fn body_from_gauge(psi: &GaugeFunction, alpha: &Scalar) -> HPolyhedron {
    let rows = psi
        .normals
        .iter()
        .map(|a| Inequality::new(a.clone(), alpha + &a.dot(&psi.anchor)))
        .collect();
    HPolyhedron::new(psi.affine_space(), rows).expect("normals match the anchor")
}

/// `V = {x in f + W : C x = d}` plus an equivalence transform
/// `psi = rho psi' + lambda^T C r`, `alpha = rho alpha' + lambda^T (d - C f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceData {
    pub c: Vec<QVector>,
    pub d: Vec<Scalar>,
    pub rho: Scalar,
    pub lambda: Vec<Scalar>,
}

impl EquivalenceData {
    /// `C`, `d` from the integral affine hull of `f + W`, identity transform.
    pub fn for_anchor(f: &QVector, w: &AffineSubspace) -> Result<Self> {
        let hull = integral_affine_hull(&w.through(f))?;
        let c = hull.c_rows();
        let lambda = vec![Scalar::zero(); c.len()];
        Ok(EquivalenceData {
            d: hull.d().0,
            c,
            rho: Scalar::one(),
            lambda,
        })
    }

    /// `d - C f`.
    pub fn residual(&self, f: &QVector) -> Vec<Scalar> {
        self.c.iter().zip(&self.d).map(|(c, d)| d - &c.dot(f)).collect()
    }
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `true` iff the interior of `B_psi` (level `alpha`) misses `V`.
pub fn is_trivial(psi: &GaugeFunction, alpha: &Scalar, eq: &EquivalenceData) -> Result<bool> {
    let n = psi.ambient_dim();
    // Variables (x, t): maximize t with a_i (x - f) + t <= alpha on V, t <= 1.
    let mut lp = LinearProgram::new(n + 1).minimize(QVector::unit(n + 1, n).neg());
    let ext = |a: &QVector, last: Scalar| -> QVector { a.iter().cloned().chain(std::iter::once(last)).collect() };
    for (g, _) in psi.subspace.equations() {
        lp.equal(ext(g, Scalar::zero()), g.dot(&psi.anchor));
    }
    for (c, d) in eq.c.iter().zip(&eq.d) {
        lp.equal(ext(c, Scalar::zero()), d.clone());
    }
    for a in &psi.normals {
        lp.le(ext(a, Scalar::one()), alpha + &a.dot(&psi.anchor));
    }
    lp.set_upper(n, Scalar::one());
    Ok(match solve_lp(&lp) {
        LpOutcome::Optimal { value, .. } => !value.is_negative(),
        LpOutcome::Infeasible { .. } => true,
        LpOutcome::Unbounded { .. } => unreachable!("t is bounded above"),
    })
}

/// A shift `lambda` with `psi(r) + lambda^T C r >= 0` on `W`, the dual
/// multipliers that produced it, and the verified optimum `0` of
/// `min {z + lambda^T C r : z >= a_i r, G r = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub lambda: Vec<Scalar>,
    pub y: Vec<Scalar>,
    pub mu: Vec<Scalar>,
    pub check_value: Scalar,
}

/// Optimum of `min {z + lambda^T C r : z >= a_i r, G r = 0}` when bounded.
fn shift_check(psi: &GaugeFunction, c: &[QVector], lambda: &[Scalar]) -> Option<Scalar> {
    let n = psi.ambient_dim();
    let cl = combination(c, lambda, n);
    let obj: QVector = cl.iter().cloned().chain(std::iter::once(Scalar::one())).collect();
    let mut lp = LinearProgram::new(n + 1).minimize(obj);
    for a in psi.forms() {
        lp.le(a.iter().cloned().chain(std::iter::once(-Scalar::one())).collect(), Scalar::zero());
    }
    for g in psi.equation_rows() {
        lp.equal(g.iter().cloned().chain(std::iter::once(Scalar::zero())).collect(), Scalar::zero());
    }
    match solve_lp(&lp) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// `rec(B_psi cap V) = lin(B_psi cap V)`.
fn recession_is_lineality(psi: &GaugeFunction, eq: &EquivalenceData) -> Result<bool> {
    let n = psi.ambient_dim();
    let eqs = psi
        .equation_rows()
        .into_iter()
        .chain(eq.c.iter().cloned())
        .map(|r| (r, Scalar::zero()))
        .collect();
    let rows = psi
        .normals
        .iter()
        .map(|a| Inequality::new(a.clone(), Scalar::zero()))
        .collect();
    Ok(HPolyhedron::new(AffineSubspace::new(n, eqs)?, rows)?.recession_is_lineality())
}

/// Finds `lambda` with `psi + lambda^T C` nonnegative on `W`. Prefers
/// `lambda = 0` when it already works.
pub fn find_nonnegative_shift(psi: &GaugeFunction, eq: &EquivalenceData) -> Result<Shift> {
    let n = psi.ambient_dim();
    let l = eq.c.len();
    let zero = vec![Scalar::zero(); l];
    if let Some(v) = shift_check(psi, &eq.c, &zero) {
        return Ok(Shift {
            lambda: zero,
            y: Vec::new(),
            mu: Vec::new(),
            check_value: v,
        });
    }
    if !recession_is_lineality(psi, eq)? {
        return Err(Error::PreconditionFailed(
            "recession cone of the body on the integral hull is not its lineality space".into(),
        ));
    }
    // A^T y + C^T lambda - G^T mu = 0, e y = 1, y >= 0.
    let forms = psi.forms();
    let g = psi.equation_rows();
    let (t, m) = (forms.len(), g.len());
    let mut lp = LinearProgram::new(t + l + m);
    for coord in 0..n {
        let row: QVector = forms
            .iter()
            .map(|a| a[coord].clone())
            .chain(eq.c.iter().map(|c| c[coord].clone()))
            .chain(g.iter().map(|r| -&r[coord]))
            .collect();
        lp.equal(row, Scalar::zero());
    }
    let ones: QVector = (0..t + l + m)
        .map(|j| if j < t { Scalar::one() } else { Scalar::zero() })
        .collect();
    lp.equal(ones, Scalar::one());
    for j in 0..t {
        lp.nonnegative(j);
    }
    let LpOutcome::Optimal { x, .. } = solve_lp(&lp) else {
        return Err(Error::NoSolution);
    };
    let y = x[..t].to_vec();
    let lambda = x[t..t + l].to_vec();
    let mu = x[t + l..].to_vec();
    let check_value = shift_check(psi, &eq.c, &lambda).ok_or(Error::NotCertified)?;
    if !check_value.is_zero() {
        return Err(Error::NotCertified);
    }
    Ok(Shift {
        lambda,
        y,
        mu,
        check_value,
    })
}

/// Why a valid inequality is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialReason {
    /// The interior of the body misses the integral hull.
    MissesIntegralHull,
    /// The right-hand side became nonpositive after the shift.
    NonpositiveRhs,
}

/// A minimal inequality `sum psi_B(r) s_r >= 1` with its evidence.
#[derive(Clone, Debug)]
pub struct MinimalCut {
    /// The maximal lattice-free body `B`.
    pub body: HPolyhedron,
    /// `psi_B`.
    pub gauge: GaugeFunction,
    /// `psi'' = rho (psi + lambda^T C)` after normalization; `psi_B <= psi''`.
    pub normalized: GaugeFunction,
    /// The nonnegative shift applied to the normalized input.
    pub shift: Shift,
    /// `1 / alpha'` after the shift.
    pub rho: Scalar,
    /// Input in terms of `psi''`: `psi = rho psi'' + lambda^T C r`.
    pub equivalence: EquivalenceData,
    /// `true` when the input was first replaced by a dominating function
    /// whose body meets the hull in a set with recession cone equal to its
    /// lineality space; the equivalence then refers to that function.
    pub dominated_first: bool,
    pub certificate: MaximalityCertificate,
}

#[derive(Clone, Debug)]
pub enum Minimalized {
    Trivial(TrivialReason),
    Minimal(Box<MinimalCut>),
}

/// Turns a valid inequality `sum psi(r) s_r >= alpha` into an equivalent
/// one dominated by a minimal inequality `sum psi_B(r) s_r >= 1`.
pub fn minimalize(
    psi: &GaugeFunction,
    alpha: &Scalar,
    lattice: &Lattice,
    eq: &EquivalenceData,
    budget: &BoxRegion,
) -> Result<Minimalized> {
    let f = &psi.anchor;
    let l = eq.c.len();
    let space = psi.affine_space();
    let residual = eq.residual(f);
    let mut cur = psi.clone();
    let mut rho_total = Scalar::one();
    let mut lambda_total = vec![Scalar::zero(); l];

    // Bring the right-hand side to 1.
    if let Some(k) = residual.iter().position(|r| !r.is_zero()) {
        let mut step = vec![Scalar::zero(); l];
        step[k] = &(Scalar::one() - alpha) / &residual[k];
        cur = cur.shifted(&eq.c, &step);
        lambda_total[k] = step[k].clone();
    } else {
        if !alpha.is_positive() {
            return Ok(Minimalized::Trivial(TrivialReason::NonpositiveRhs));
        }
        rho_total = alpha.recip();
        cur = cur.scaled(&rho_total);
    }
    if is_trivial(&cur, &Scalar::one(), eq)? {
        return Ok(Minimalized::Trivial(TrivialReason::MissesIntegralHull));
    }

    let mut dominated_first = false;
    if !recession_is_lineality(&cur, eq)? {
        let b_psi = body_from_gauge(&cur, &Scalar::one());
        let s = maximalize(&b_psi, &space, lattice, budget)?;
        let mut normals = Vec::new();
        for h in &s.inequalities {
            let top = b_psi.max_value(&h.normal).ok_or(Error::UnboundedRegion)?;
            normals.push(h.normal.scale(&(&top - &h.normal.dot(f)).recip()));
        }
        cur = GaugeFunction::new(f.clone(), psi.subspace.clone(), normals)?;
        dominated_first = true;
    }

    let shift = find_nonnegative_shift(&cur, eq)?;
    cur = cur.shifted(&eq.c, &shift.lambda);
    for (t, s) in lambda_total.iter_mut().zip(&shift.lambda) {
        *t += s;
    }
    let alpha_shifted = Scalar::one() + dot(&shift.lambda, &residual);
    if !alpha_shifted.is_positive() {
        return Ok(Minimalized::Trivial(TrivialReason::NonpositiveRhs));
    }
    let rho = alpha_shifted.recip();
    cur = cur.scaled(&rho);
    rho_total = &rho_total * &rho;
    for t in lambda_total.iter_mut() {
        *t = &*t * &rho;
    }

    let b_psi = body_from_gauge(&cur, &Scalar::one());
    let body = maximalize(&b_psi, &space, lattice, budget)?;
    let gauge = gauge_from_body(&body, f)?;
    let certificate = match certify_maximal(&body, &space, lattice)? {
        Verdict::Maximal(c) => c,
        Verdict::NotMaximal(_) => return Err(Error::NotCertified),
    };
    let inv = rho_total.recip();
    let equivalence = EquivalenceData {
        c: eq.c.clone(),
        d: eq.d.clone(),
        lambda: lambda_total.iter().map(|t| -&(t * &inv)).collect(),
        rho: inv,
    };
    Ok(Minimalized::Minimal(Box::new(MinimalCut {
        body,
        gauge,
        normalized: cur,
        shift,
        rho,
        equivalence,
        dominated_first,
        certificate,
    })))
}

/// `true` iff `psi(r) <= psi_prime(r)` for every `r` in `W`.
pub fn dominates(psi: &GaugeFunction, psi_prime: &GaugeFunction) -> Result<bool> {
    if psi.ambient_dim() != psi_prime.ambient_dim() {
        return Err(Error::DimensionMismatch("gauges differ in dimension".into()));
    }
    let n = psi.ambient_dim();
    let g = psi.equation_rows();
    for a in psi.forms() {
        // min z - a.r subject to b.r <= z for every form b of psi', G r = 0.
        let obj: QVector = a.neg().iter().cloned().chain(std::iter::once(Scalar::one())).collect();
        let mut lp = LinearProgram::new(n + 1).minimize(obj);
        for b in psi_prime.forms() {
            lp.le(b.iter().cloned().chain(std::iter::once(-Scalar::one())).collect(), Scalar::zero());
        }
        for row in &g {
            lp.equal(row.iter().cloned().chain(std::iter::once(Scalar::zero())).collect(), Scalar::zero());
        }
        if !solve_lp(&lp).is_optimal() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Forms that are not dominated by the others on `W`.
fn essential_forms(psi: &GaugeFunction) -> Result<Vec<QVector>> {
    let mut forms = psi.forms();
    let mut i = 0;
    while i < forms.len() && forms.len() > 1 {
        let mut others = forms.clone();
        let a = others.remove(i);
        let single = GaugeFunction { normals: vec![a], ..psi.clone() };
        let rest = GaugeFunction { normals: others.clone(), ..psi.clone() };
        if dominates(&single, &rest)? {
            forms = others;
        } else {
            i += 1;
        }
    }
    Ok(forms)
}

/// Searches `rho > 0` and `lambda` with `psi = rho psi' + lambda^T C r` on
/// `W` and `alpha = rho alpha' + lambda^T (d - C f)`.
pub fn check_equivalent(
    psi: &GaugeFunction,
    alpha: &Scalar,
    psi_prime: &GaugeFunction,
    alpha_prime: &Scalar,
    eq: &EquivalenceData,
) -> Result<Option<(Scalar, Vec<Scalar>)>> {
    let p = essential_forms(psi)?;
    let q = essential_forms(psi_prime)?;
    if p.len() != q.len() {
        return Ok(None);
    }
    let search = Matching {
        p: &p,
        q: &q,
        c: &eq.c,
        g: psi.equation_rows(),
        alpha,
        alpha_prime,
        residual: eq.residual(&psi.anchor),
        n: psi.ambient_dim(),
    };
    let mut used = vec![false; q.len()];
    let mut assignment = Vec::new();
    search.extend(&mut assignment, &mut used, &|rho, lambda| {
        let candidate = psi_prime.scaled(rho).shifted(&eq.c, lambda);
        Ok(dominates(psi, &candidate)? && dominates(&candidate, psi)?)
    })
}

struct Matching<'a> {
    p: &'a [QVector],
    q: &'a [QVector],
    c: &'a [QVector],
    g: Vec<QVector>,
    alpha: &'a Scalar,
    alpha_prime: &'a Scalar,
    residual: Vec<Scalar>,
    n: usize,
}

type Check<'c> = dyn Fn(&Scalar, &[Scalar]) -> Result<bool> + 'c;

impl Matching<'_> {
    /// Unknowns `(rho, lambda, mu_0, ..., mu_{s-1})`; rows for each matched
    /// pair plus the right-hand-side equation.
    fn system(&self, assignment: &[usize], fix_rho: bool) -> (QMatrix, QVector) {
        let (l, m) = (self.c.len(), self.g.len());
        let width = 1 + l + m * self.p.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (i, &j) in assignment.iter().enumerate() {
            for t in 0..self.n {
                let mut row = QVector::zeros(width);
                row[0] = self.q[j][t].clone();
                for (k, c) in self.c.iter().enumerate() {
                    row[1 + k] = c[t].clone();
                }
                for (k, g) in self.g.iter().enumerate() {
                    row[1 + l + m * i + k] = g[t].clone();
                }
                rows.push(row);
                rhs.push(self.p[i][t].clone());
            }
        }
        let mut row = QVector::zeros(width);
        row[0] = self.alpha_prime.clone();
        for (k, r) in self.residual.iter().enumerate() {
            row[1 + k] = r.clone();
        }
        rows.push(row);
        rhs.push(self.alpha.clone());
        if fix_rho {
            rows.push(QVector::unit(width, 0));
            rhs.push(Scalar::one());
        }
        (QMatrix::from_rows(&rows, width), QVector(rhs))
    }

    fn solve(&self, assignment: &[usize]) -> Result<LinearSolution> {
        let (a, b) = self.system(assignment, false);
        solve_linear(&a, &b)
    }

    fn extend(
        &self,
        assignment: &mut Vec<usize>,
        used: &mut [bool],
        check: &Check<'_>,
    ) -> Result<Option<(Scalar, Vec<Scalar>)>> {
        let solution = self.solve(assignment)?;
        if solution == LinearSolution::Inconsistent {
            return Ok(None);
        }
        if assignment.len() == self.p.len() {
            let l = self.c.len();
            let x = match solution {
                LinearSolution::Unique(x) => x,
                LinearSolution::Affine { particular, kernel } => {
                    if kernel.iter().any(|k| !k[0].is_zero()) {
                        let (a, b) = self.system(assignment, true);
                        match solve_linear(&a, &b)? {
                            LinearSolution::Inconsistent => return Ok(None),
                            s => s.into_point().expect("consistent"),
                        }
                    } else {
                        particular
                    }
                }
                LinearSolution::Inconsistent => unreachable!(),
            };
            let rho = x[0].clone();
            let lambda = x[1..1 + l].to_vec();
            if rho.is_positive() && check(&rho, &lambda)? {
                return Ok(Some((rho, lambda)));
            }
            return Ok(None);
        }
        for j in 0..self.q.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            assignment.push(j);
            let found = self.extend(assignment, used, check)?;
            assignment.pop();
            used[j] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// A finite corner relaxation `f + sum r^j s_j` integral, `s >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerInstance {
    pub anchor: QVector,
    /// The linear space `W`.
    pub subspace: AffineSubspace,
    pub rays: Vec<QVector>,
}

impl CornerInstance {
    pub fn new(anchor: QVector, subspace: AffineSubspace, rays: Vec<QVector>) -> Result<Self> {
        let n = anchor.dim();
        if subspace.ambient_dim() != n || rays.iter().any(|r| r.dim() != n) {
            return Err(Error::DimensionMismatch("instance data differ in dimension".into()));
        }
        if let Some(r) = rays.iter().find(|r| !subspace.contains_direction(r)) {
            return Err(Error::PreconditionFailed(format!("ray {r} is not a direction of the subspace")));
        }
        integral_affine_hull(&subspace.through(&anchor))?;
        Ok(CornerInstance {
            anchor,
            subspace,
            rays,
        })
    }

    /// Integral points of `f + W` inside `area`.
    fn lattice_points(&self, area: &BoxRegion) -> Result<Vec<QVector>> {
        let n = self.anchor.dim();
        match lattice_in_subspace(&Lattice::integer(n), &self.subspace.through(&self.anchor))? {
            Some(lattice) => enumerate_points(&lattice, Region::Box(area), Mode::Closed),
            None => Ok(Vec::new()),
        }
    }

    /// `min {coeffs . s : sum r^j s_j = x - f, s >= 0}`.
    fn representation(&self, coeffs: &[Scalar], x: &QVector) -> LpOutcome {
        let k = self.rays.len();
        let mut lp = LinearProgram::new(k).minimize(QVector(coeffs.to_vec()));
        let target = x.sub(&self.anchor);
        for t in 0..x.dim() {
            lp.equal(self.rays.iter().map(|r| r[t].clone()).collect(), target[t].clone());
        }
        for j in 0..k {
            lp.nonnegative(j);
        }
        solve_lp(&lp)
    }
}

/// Coefficients `psi(r^j)` of the cut `sum psi(r^j) s_j >= 1`.
pub fn cut_for_instance(psi: &GaugeFunction, inst: &CornerInstance) -> Result<Vec<Scalar>> {
    if psi.anchor != inst.anchor || !psi.subspace.same_set(&inst.subspace) {
        return Err(Error::PreconditionFailed("gauge and instance differ in anchor or subspace".into()));
    }
    Ok(inst.rays.iter().map(|r| eval_gauge(psi, r)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    /// No violation among the integral points of the box.
    Valid { points_checked: usize },
    /// `x` is reached by `s` with `coeffs . s < 1`; `value` is the optimum,
    /// or `None` when it is unbounded below.
    Violated {
        x: QVector,
        s: QVector,
        value: Option<Scalar>,
    },
}

/// Checks `sum coeffs_j s_j >= 1` at every integral point of `f + W` in the
/// box. Among violations the most violated is reported, then the one
/// nearest to `f`, then the lexicographically largest.
pub fn validity_oracle(coeffs: &[Scalar], inst: &CornerInstance, area: &BoxRegion) -> Result<Validity> {
    if coeffs.len() != inst.rays.len() {
        return Err(Error::DimensionMismatch("one coefficient per ray expected".into()));
    }
    let points = inst.lattice_points(area)?;
    let mut worst: Option<(Option<Scalar>, Scalar, QVector, QVector)> = None;
    for x in &points {
        let (value, s) = match inst.representation(coeffs, x) {
            LpOutcome::Optimal { x: s, value, .. } if value < Scalar::one() => (Some(value), s),
            LpOutcome::Unbounded { x: s, .. } => (None, s),
            _ => continue,
        };
        let dist = x.sub(&inst.anchor).norm_sq();
        let better = match &worst {
            None => true,
            Some((wv, wd, wx, _)) => {
                let by_value = match (&value, wv) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Less,
                    (Some(_), None) => std::cmp::Ordering::Greater,
                    (Some(a), Some(b)) => a.cmp(b),
                };
                by_value.then(dist.cmp(wd)).then(wx.cmp(x)).is_lt()
            }
        };
        if better {
            worst = Some((value, dist, x.clone(), s));
        }
    }
    Ok(match worst {
        Some((value, _, x, s)) => Validity::Violated { x, s, value },
        None => Validity::Valid {
            points_checked: points.len(),
        },
    })
}

/// Points of the corner relaxation where the cut holds with equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tightness {
    /// Size of the affinely independent subset.
    pub count: usize,
    /// The affinely independent tight solutions `s`.
    pub points: Vec<QVector>,
    /// The integral points they reach, in the same order.
    pub targets: Vec<QVector>,
}

/// Collects minimizing solutions with `coeffs . s = 1` over the integral
/// points of the box and keeps an affinely independent subset, greedily in
/// lexicographic order of the targets. Evidence only, never a proof.
pub fn tightness_witnesses(coeffs: &[Scalar], inst: &CornerInstance, area: &BoxRegion) -> Result<Tightness> {
    if coeffs.len() != inst.rays.len() {
        return Err(Error::DimensionMismatch("one coefficient per ray expected".into()));
    }
    let mut points: Vec<QVector> = Vec::new();
    let mut targets = Vec::new();
    let mut diffs: Vec<QVector> = Vec::new();
    for x in inst.lattice_points(area)? {
        let LpOutcome::Optimal { x: s, value, .. } = inst.representation(coeffs, &x) else {
            continue;
        };
        if value != Scalar::one() {
            continue;
        }
        let independent = match points.first() {
            None => true,
            Some(s0) => {
                let mut trial = diffs.clone();
                trial.push(s.sub(s0));
                let ok = crate::field::rank_of(&trial, s.dim()) == trial.len();
                if ok {
                    diffs = trial;
                }
                ok
            }
        };
        if independent {
            points.push(s);
            targets.push(x);
        }
    }
    Ok(Tightness {
        count: points.len(),
        points,
        targets,
    })
}

/// Rays of a maximal body `B = P + L` seen from `f`: `v - f` for the
/// vertices of `P = B cap (f + L^perp)` and a rational basis of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    pub anchor: QVector,
    pub vertex_rays: Vec<QVector>,
    pub lineality_rays: Vec<QVector>,
    /// Smallest `N >= 1` with `N r` integral for every lineality ray.
    pub scale: BigInt,
}

impl FiniteModel {
    pub fn k(&self) -> usize {
        self.vertex_rays.len()
    }

    pub fn h(&self) -> usize {
        self.lineality_rays.len()
    }

    pub fn rays(&self) -> Vec<QVector> {
        self.vertex_rays.iter().chain(&self.lineality_rays).cloned().collect()
    }

    /// Coefficients 1 on vertex rays and 0 on lineality rays.
    pub fn cut(&self) -> Vec<Scalar> {
        (0..self.k() + self.h())
            .map(|j| if j < self.k() { Scalar::one() } else { Scalar::zero() })
            .collect()
    }

    /// The corner instance on the model's rays in the whole space.
    pub fn instance(&self) -> Result<CornerInstance> {
        CornerInstance::new(self.anchor.clone(), AffineSubspace::whole(self.anchor.dim()), self.rays())
    }
}

pub fn finite_model(b: &HPolyhedron, f: &QVector, lattice: &Lattice) -> Result<FiniteModel> {
    match certify_maximal(b, &b.ambient, lattice)? {
        Verdict::Maximal(MaximalityCertificate::Polyhedral(_)) => {}
        _ => return Err(Error::NotCertified),
    }
    if !b.ambient.contains(f) || !b.inequalities.iter().all(|h| h.holds_strictly(f)) {
        return Err(Error::AnchorNotInterior);
    }
    let lin = b.lineality();
    let mut lineality_rays = if lin.is_empty() {
        Vec::new()
    } else {
        lattice_subspace_basis(lattice, &lin).map_err(|_| Error::NotCertified)?
    };
    for r in lineality_rays.iter_mut() {
        if r.leading().is_some_and(|i| r[i].is_negative()) {
            *r = r.neg();
        }
    }
    if lineality_rays.iter().any(|r| !r.is_rational()) {
        return Err(Error::NotCertified);
    }
    let mut scale = BigInt::one();
    for r in &lineality_rays {
        for x in r.iter() {
            scale = scale.lcm(x.rat().denom());
        }
    }
    let eqs: Vec<(QVector, Scalar)> = lineality_rays.iter().map(|l| (l.clone(), l.dot(f))).collect();
    let p = b.restricted(&eqs, &[])?;
    let vertex_rays = p.vertices()?.iter().map(|v| v.sub(f)).collect();
    Ok(FiniteModel {
        anchor: f.clone(),
        vertex_rays,
        lineality_rays,
        scale,
    })
}

/// `min {alpha . s : sum r^j s_j = r, s_j >= 0 for vertex rays}`; lineality
/// variables are free.
pub fn psi_alpha(alpha: &[Scalar], model: &FiniteModel, r: &QVector) -> Result<Scalar> {
    let rays = model.rays();
    if alpha.len() != rays.len() {
        return Err(Error::DimensionMismatch("one coefficient per ray expected".into()));
    }
    let mut lp = LinearProgram::new(rays.len()).minimize(QVector(alpha.to_vec()));
    for t in 0..r.dim() {
        lp.equal(rays.iter().map(|ray| ray[t].clone()).collect(), r[t].clone());
    }
    for j in 0..model.k() {
        lp.nonnegative(j);
    }
    match solve_lp(&lp) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible { .. } => Err(Error::PreconditionFailed("r is not reached by the rays".into())),
        LpOutcome::Unbounded { .. } => Err(Error::PreconditionFailed("the minimum is unbounded".into())),
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

    fn plane() -> AffineSubspace {
        AffineSubspace::new(3, vec![(v("(0, 1, 1*sqrt(2))"), s("0"))]).unwrap()
    }

    fn example_psi() -> GaugeFunction {
        GaugeFunction::new(v("(1/2, 0, 0)"), plane(), vec![v("(-4, -4, 0)"), v("(4, -4, 0)")]).unwrap()
    }

    fn z2_gauge(normals: &[&str], f: &str) -> GaugeFunction {
        GaugeFunction::new(v(f), AffineSubspace::whole(2), normals.iter().map(|a| v(a)).collect()).unwrap()
    }

    fn triangle() -> HPolyhedron {
        HPolyhedron::from_int_rows(&[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 2)])
    }

    #[test]
    fn gauges_of_bodies() {
        let b = HPolyhedron::new(plane(), vec![Inequality::new(v("(1, 0, 0)"), s("1")), Inequality::new(v("(-1, 0, 0)"), s("0"))]).unwrap();
        let psi = gauge_from_body(&b, &v("(1/2, 0, 0)")).unwrap();
        assert_eq!(psi.normals, vec![v("(2, 0, 0)"), v("(-2, 0, 0)")]);
        assert_eq!(eval_gauge(&psi, &v("(1, 0, 0)")), s("2"));
        assert_eq!(eval_gauge(&psi, &v("(0, 1, -1/2*sqrt(2))")), s("0"));
        let t = gauge_from_body(&triangle(), &v("(1/2, 1/2)")).unwrap();
        assert_eq!(t.normals, vec![v("(-2, 0)"), v("(0, -2)"), v("(1, 1)")]);
        assert_eq!(gauge_from_body(&triangle(), &v("(0, 1)")), Err(Error::AnchorNotInterior));
        assert_eq!(body_from_gauge(&t, &s("1")).canonical().unwrap(), triangle().canonical().unwrap());
    }

    #[test]
    fn sign_of_the_worked_example() {
        let psi = example_psi();
        assert_eq!(eval_gauge(&psi, &v("(0, -1, 1/2*sqrt(2))")), s("4"));
        assert_eq!(eval_gauge(&psi, &v("(0, 1, -1/2*sqrt(2))")), s("-4"));
    }

    #[test]
    fn triviality() {
        let eq = EquivalenceData::for_anchor(&v("(1/2, 0, 0)"), &plane()).unwrap();
        assert_eq!(eq.c, vec![v("(0, 1, 0)")]);
        assert!(!is_trivial(&example_psi(), &s("1"), &eq).unwrap());
        let f = v("(1/2, -1, 1/2*sqrt(2))");
        let psi = GaugeFunction::new(f.clone(), plane(), vec![v("(0, 2, 0)")]).unwrap();
        let eq = EquivalenceData::for_anchor(&f, &plane()).unwrap();
        assert!(is_trivial(&psi, &s("1"), &eq).unwrap());
    }

    #[test]
    fn shift_for_the_worked_example() {
        let eq = EquivalenceData::for_anchor(&v("(1/2, 0, 0)"), &plane()).unwrap();
        let shift = find_nonnegative_shift(&example_psi(), &eq).unwrap();
        assert_eq!(shift.lambda, vec![s("4")]);
        assert!(shift.check_value.is_zero());
        let nonneg = GaugeFunction::new(v("(1/2, 0, 0)"), plane(), vec![v("(-4, 0, 0)"), v("(4, 0, 0)")]).unwrap();
        assert_eq!(find_nonnegative_shift(&nonneg, &eq).unwrap().lambda, vec![s("0")]);
        let full = EquivalenceData::for_anchor(&v("(1/2, 1/2)"), &AffineSubspace::whole(2)).unwrap();
        let split = z2_gauge(&["(2, 0)", "(-2, 0)"], "(1/2, 1/2)");
        assert!(find_nonnegative_shift(&split, &full).unwrap().lambda.is_empty());
    }

    #[test]
    fn minimalize_worked_example() {
        let eq = EquivalenceData::for_anchor(&v("(1/2, 0, 0)"), &plane()).unwrap();
        let out = minimalize(&example_psi(), &s("1"), &Lattice::integer(3), &eq, &BoxRegion::cube(3, -10, 10)).unwrap();
        let Minimalized::Minimal(cut) = out else { panic!("trivial") };
        assert_eq!(cut.gauge.normals, vec![v("(-2, 0, 0)"), v("(2, 0, 0)")]);
        assert_eq!(cut.gauge.to_string(), "max{-2*r1, 2*r1}");
        assert_eq!(cut.shift.lambda, vec![s("4")]);
        assert_eq!(cut.rho, s("1"));
        assert_eq!((cut.equivalence.rho.clone(), cut.equivalence.lambda.clone()), (s("1"), vec![s("-4")]));
        assert!(dominates(&cut.gauge, &cut.normalized).unwrap());
        let w = check_equivalent(&example_psi(), &s("1"), &cut.normalized, &s("1"), &eq).unwrap();
        assert_eq!(w, Some((s("1"), vec![s("-4")])));
    }

    #[test]
    fn minimalize_fixed_point_and_trivial() {
        let r2 = AffineSubspace::whole(2);
        let f = v("(1/2, 1/2)");
        let eq = EquivalenceData::for_anchor(&f, &r2).unwrap();
        let z2 = Lattice::integer(2);
        let budget = BoxRegion::cube(2, -10, 10);
        let psi = gauge_from_body(&triangle(), &f).unwrap();
        let Minimalized::Minimal(cut) = minimalize(&psi, &s("1"), &z2, &eq, &budget).unwrap() else {
            panic!("trivial")
        };
        assert_eq!(cut.gauge, psi);
        assert_eq!((cut.rho.clone(), cut.shift.lambda.clone()), (s("1"), vec![]));
        let f3 = v("(1/2, -1, 1/2*sqrt(2))");
        let eq3 = EquivalenceData::for_anchor(&f3, &plane()).unwrap();
        let psi3 = GaugeFunction::new(f3, plane(), vec![v("(0, 2, 0)")]).unwrap();
        let out = minimalize(&psi3, &s("1"), &Lattice::integer(3), &eq3, &BoxRegion::cube(3, -5, 5)).unwrap();
        assert!(matches!(out, Minimalized::Trivial(_)));
    }

    #[test]
    fn domination_and_equivalence() {
        let a = z2_gauge(&["(2, 0)", "(-2, 0)"], "(1/2, 1/2)");
        let b = z2_gauge(&["(4, 0)", "(-4, 0)"], "(1/2, 1/2)");
        assert!(dominates(&a, &b).unwrap());
        assert!(!dominates(&b, &a).unwrap());
        assert!(dominates(&a, &a).unwrap());
        let psi = example_psi();
        let bar = GaugeFunction::new(psi.anchor.clone(), plane(), vec![v("(-2, -4, 0)"), v("(2, -4, 0)")]).unwrap();
        assert!(dominates(&bar, &psi).unwrap());
        let eq = EquivalenceData::for_anchor(&v("(1/2, 1/2)"), &AffineSubspace::whole(2)).unwrap();
        assert_eq!(check_equivalent(&a, &s("1"), &a, &s("1"), &eq).unwrap(), Some((s("1"), vec![])));
        assert_eq!(check_equivalent(&a, &s("1"), &a.scaled(&s("2")), &s("1"), &eq).unwrap(), None);
    }

    #[test]
    fn cuts_and_validity() {
        let f = v("(1/2, 1/2)");
        let r2 = AffineSubspace::whole(2);
        let rays = vec![v("(1, 0)"), v("(0, 1)"), v("(-1, 0)"), v("(0, -1)")];
        let inst = CornerInstance::new(f.clone(), r2.clone(), rays).unwrap();
        let psi = gauge_from_body(&triangle(), &f).unwrap();
        let cut = cut_for_instance(&psi, &inst).unwrap();
        assert_eq!(cut, vec![s("1"), s("1"), s("2"), s("2")]);
        let area = BoxRegion::cube(2, -5, 5);
        assert_eq!(validity_oracle(&cut, &inst, &area).unwrap(), Validity::Valid { points_checked: 121 });
        match validity_oracle(&vec![Scalar::zero(); 4], &inst, &area).unwrap() {
            Validity::Violated { x, value, .. } => {
                assert_eq!(x, v("(1, 1)"));
                assert_eq!(value, Some(Scalar::zero()));
            }
            other => panic!("{other:?}"),
        }
        let split = CornerInstance::new(f, r2, vec![v("(1, 0)"), v("(-1, 0)")]).unwrap();
        assert!(matches!(validity_oracle(&[s("2"), s("2")], &split, &area).unwrap(), Validity::Valid { .. }));
    }

    #[test]
    fn finite_models() {
        let z2 = Lattice::integer(2);
        let split = HPolyhedron::from_int_rows(&[(&[1, 0], 1), (&[-1, 0], 0)]);
        let f = v("(1/2, 1/2)");
        let m = finite_model(&split, &f, &z2).unwrap();
        assert_eq!(m.vertex_rays, vec![v("(-1/2, 0)"), v("(1/2, 0)")]);
        assert_eq!(m.lineality_rays, vec![v("(0, 1)")]);
        assert_eq!(m.scale, BigInt::one());
        let alpha = m.cut();
        assert_eq!(psi_alpha(&alpha, &m, &v("(1, 0)")).unwrap(), s("2"));
        assert_eq!(psi_alpha(&alpha, &m, &v("(0, 1)")).unwrap(), s("0"));
        assert_eq!(psi_alpha(&alpha, &m, &v("(0, 0)")).unwrap(), s("0"));
        let t = tightness_witnesses(&alpha, &m.instance().unwrap(), &BoxRegion::cube(2, -3, 3)).unwrap();
        assert!(t.count >= 3);
        let huge = tightness_witnesses(&[s("10"), s("10")], &CornerInstance::new(f.clone(), AffineSubspace::whole(2), vec![v("(1, 0)"), v("(-1, 0)")]).unwrap(), &BoxRegion::cube(2, -3, 3)).unwrap();
        assert_eq!(huge.count, 0);
        let tri = finite_model(&triangle(), &f, &z2).unwrap();
        assert_eq!((tri.k(), tri.h()), (3, 0));
        let square = HPolyhedron::from_box(&v("(0, 0)"), &v("(1, 1)"));
        assert_eq!(finite_model(&square, &f, &z2), Err(Error::NotCertified));
    }
}
