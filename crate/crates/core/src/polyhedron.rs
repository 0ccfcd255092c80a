//! H-polyhedra living inside affine subspaces of `R^n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{
    independent_subset, kernel_basis, project_onto_span, rank_of, solve_linear, LinearSolution,
    QMatrix, QVector, Scalar,
};
use crate::lp::{solve_lp, LinearProgram, LpOutcome};

/// `normal . x <= rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub normal: QVector,
    pub rhs: Scalar,
}

impl Inequality {
    pub fn new(normal: QVector, rhs: Scalar) -> Self {
        Inequality { normal, rhs }
    }

    pub fn slack(&self, x: &QVector) -> Scalar {
        &self.rhs - &self.normal.dot(x)
    }

    pub fn holds(&self, x: &QVector) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn holds_strictly(&self, x: &QVector) -> bool {
        self.slack(x).is_positive()
    }

    pub fn is_tight(&self, x: &QVector) -> bool {
        self.slack(x).is_zero()
    }

    /// Human form such as `x1 + x2 <= 2` or `x1 >= 0`.
    pub fn pretty(&self) -> String {
        let flip = self
            .normal
            .leading()
            .is_some_and(|i| self.normal[i].is_negative());
        let (normal, rhs, op) = if flip {
            (self.normal.neg(), -&self.rhs, ">=")
        } else {
            (self.normal.clone(), self.rhs.clone(), "<=")
        };
        format!("{} {op} {rhs}", linear_form(&normal))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl fmt::Debug for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.normal, self.rhs)
    }
}

/// Renders `a . x` as `x1 - 2*x2 + (1+1*sqrt(2))*x3`.
pub fn linear_form(a: &QVector) -> String {
    linear_form_in(a, "x")
}

/// [`linear_form`] with variables named `{var}1`, `{var}2`, ...
pub fn linear_form_in(a: &QVector, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let var = format!("{var}{}", i + 1);
        let single = c.is_rational() || num_traits::Zero::is_zero(c.rat());
        let (neg, mag) = if single && c.is_negative() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        let term = if mag == Scalar::one() {
            var
        } else if single {
            format!("{mag}*{var}")
        } else {
            format!("({mag})*{var}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `{x : a_k . x = b_k}` with a cached point and direction basis.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    dim_ambient: usize,
    equations: Vec<(QVector, Scalar)>,
    point: QVector,
    directions: Vec<QVector>,
}

impl AffineSubspace {
    pub fn new(n: usize, equations: Vec<(QVector, Scalar)>) -> Result<Self> {
        for (a, _) in &equations {
            if a.dim() != n {
                return Err(Error::DimensionMismatch(format!(
                    "equation has {} coefficients, expected {n}",
                    a.dim()
                )));
            }
        }
        let rows: Vec<QVector> = equations.iter().map(|(a, _)| a.clone()).collect();
        let a = QMatrix::from_rows(&rows, n);
        let b: QVector = equations.iter().map(|(_, b)| b.clone()).collect();
        let point = match solve_linear(&a, &b)? {
            LinearSolution::Inconsistent => return Err(Error::EmptySubspace),
            sol => sol.into_point()?,
        };
        let directions = kernel_basis(&a);
        Ok(AffineSubspace {
            dim_ambient: n,
            equations,
            point,
            directions,
        })
    }

    pub fn whole(n: usize) -> Self {
        AffineSubspace::new(n, Vec::new()).expect("whole space")
    }

    /// The linear subspace spanned by `vectors`.
    pub fn span(n: usize, vectors: &[QVector]) -> Self {
        let a = QMatrix::from_rows(vectors, n);
        let eqs = kernel_basis(&a)
            .into_iter()
            .map(|v| (v, Scalar::zero()))
            .collect();
        AffineSubspace::new(n, eqs).expect("spans are nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn equations(&self) -> &[(QVector, Scalar)] {
        &self.equations
    }

    pub fn point(&self) -> &QVector {
        &self.point
    }

    pub fn directions(&self) -> &[QVector] {
        &self.directions
    }

    pub fn contains(&self, x: &QVector) -> bool {
        x.dim() == self.dim_ambient && self.equations.iter().all(|(a, b)| &a.dot(x) == b)
    }

    pub fn contains_direction(&self, r: &QVector) -> bool {
        r.dim() == self.dim_ambient && self.equations.iter().all(|(a, _)| a.dot(r).is_zero())
    }

    /// Same direction space passing through `p`.
    pub fn through(&self, p: &QVector) -> AffineSubspace {
        let eqs = self
            .equations
            .iter()
            .map(|(a, _)| (a.clone(), a.dot(p)))
            .collect();
        AffineSubspace::new(self.dim_ambient, eqs).expect("translate of a nonempty subspace")
    }

    /// The direction space as a linear subspace.
    pub fn linear_part(&self) -> AffineSubspace {
        self.through(&QVector::zeros(self.dim_ambient))
    }

    pub fn with_equations(&self, extra: &[(QVector, Scalar)]) -> Result<AffineSubspace> {
        let mut eqs = self.equations.clone();
        eqs.extend(extra.iter().cloned());
        AffineSubspace::new(self.dim_ambient, eqs)
    }

    /// Orthogonal projection of a vector onto the direction space.
    pub fn project_direction(&self, v: &QVector) -> QVector {
        project_onto_span(v, &self.directions)
    }

    /// Equations with dependent rows dropped.
    pub fn independent_equations(&self) -> Vec<(QVector, Scalar)> {
        let rows: Vec<QVector> = self.equations.iter().map(|(a, _)| a.clone()).collect();
        independent_subset(&rows, self.dim_ambient)
            .into_iter()
            .map(|i| self.equations[i].clone())
            .collect()
    }

    /// `true` when both describe the same point set.
    pub fn same_set(&self, other: &AffineSubspace) -> bool {
        self.dim_ambient == other.dim_ambient
            && self.dim() == other.dim()
            && other.contains(&self.point)
            && self.directions.iter().all(|d| other.contains_direction(d))
    }
}

impl fmt::Debug for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.equations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} = {b}", linear_form(a))?;
        }
        write!(f, "}} in R^{}", self.dim_ambient)
    }
}

/// `{x in ambient : a_i . x <= b_i}`.
#[derive(Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    pub ambient: AffineSubspace,
    pub inequalities: Vec<Inequality>,
}

/// One irredundant inequality and the face it induces.
#[derive(Clone, Debug)]
pub struct Facet {
    pub index: usize,
    pub inequality: Inequality,
    pub face: HPolyhedron,
}

/// Recession cone and lineality space of a polyhedron.
#[derive(Clone, Debug)]
pub struct Recession {
    /// `{r in dir(ambient) : a_i . r <= 0}`.
    pub cone: HPolyhedron,
    /// Basis of `{r in dir(ambient) : a_i . r = 0}`.
    pub lineality: Vec<QVector>,
}

impl HPolyhedron {
    pub fn new(ambient: AffineSubspace, inequalities: Vec<Inequality>) -> Result<Self> {
        let n = ambient.ambient_dim();
        if let Some(bad) = inequalities.iter().find(|h| h.normal.dim() != n) {
            return Err(Error::DimensionMismatch(format!(
                "inequality has {} coefficients, expected {n}",
                bad.normal.dim()
            )));
        }
        Ok(HPolyhedron {
            ambient,
            inequalities,
        })
    }

    /// Full-space polyhedron from `(normal, rhs)` integer rows.
    pub fn from_int_rows(rows: &[(&[i64], i64)]) -> Self {
        let n = rows.first().map_or(0, |r| r.0.len());
        let ineqs = rows
            .iter()
            .map(|(a, b)| Inequality::new(QVector::from_ints(a), Scalar::from_int(*b)))
            .collect();
        HPolyhedron::new(AffineSubspace::whole(n), ineqs).expect("consistent rows")
    }

    /// Axis-aligned box `lower <= x <= upper` in the whole space.
    pub fn from_box(lower: &QVector, upper: &QVector) -> Self {
        let n = lower.dim();
        let mut ineqs = Vec::new();
        for i in 0..n {
            ineqs.push(Inequality::new(QVector::unit(n, i), upper[i].clone()));
            ineqs.push(Inequality::new(QVector::unit(n, i).neg(), -&lower[i]));
        }
        HPolyhedron::new(AffineSubspace::whole(n), ineqs).expect("box rows")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.ambient_dim()
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.ambient.contains(x) && self.inequalities.iter().all(|h| h.holds(x))
    }

    /// Membership in the interior relative to the ambient subspace.
    pub fn interior_contains(&self, x: &QVector) -> bool {
        self.ambient.contains(x) && self.inequalities.iter().all(|h| h.holds_strictly(x))
    }

    /// Intersection with further inequalities and equations.
    pub fn restricted(&self, extra_eq: &[(QVector, Scalar)], extra: &[Inequality]) -> Result<Self> {
        let ambient = self.ambient.with_equations(extra_eq)?;
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(extra.iter().cloned());
        HPolyhedron::new(ambient, ineqs)
    }

    pub fn intersect(&self, other: &HPolyhedron) -> Result<Self> {
        self.restricted(other.ambient.equations(), &other.inequalities)
    }

    /// The LP `min c.x` over this polyhedron.
    pub fn lp(&self, c: &QVector) -> LinearProgram {
        let mut lp = LinearProgram::new(self.ambient_dim()).minimize(c.clone());
        for (a, b) in self.ambient.equations() {
            lp.equal(a.clone(), b.clone());
        }
        for h in &self.inequalities {
            lp.le(h.normal.clone(), h.rhs.clone());
        }
        lp
    }

    pub fn minimize(&self, c: &QVector) -> LpOutcome {
        solve_lp(&self.lp(c))
    }

    pub fn maximize(&self, c: &QVector) -> LpOutcome {
        solve_lp(&self.lp(&c.neg()))
    }

    /// `max c.x`, `None` when unbounded or empty.
    pub fn max_value(&self, c: &QVector) -> Option<Scalar> {
        self.maximize(c).value().map(|v| -v)
    }

    pub fn min_value(&self, c: &QVector) -> Option<Scalar> {
        self.minimize(c).value().cloned()
    }

    pub fn is_empty(&self) -> bool {
        self.minimize(&QVector::zeros(self.ambient_dim())).is_infeasible()
    }

    pub fn some_point(&self) -> Option<QVector> {
        self.minimize(&QVector::zeros(self.ambient_dim()))
            .point()
            .cloned()
    }

    /// Indices of inequalities that hold with equality on the whole polyhedron.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        (0..self.inequalities.len())
            .filter(|&i| {
                let h = &self.inequalities[i];
                self.min_value(&h.normal).as_ref() == Some(&h.rhs)
            })
            .collect()
    }

    pub fn affine_hull(&self) -> Result<AffineSubspace> {
        let extra: Vec<_> = self
            .implicit_equalities()
            .into_iter()
            .map(|i| {
                let h = &self.inequalities[i];
                (h.normal.clone(), h.rhs.clone())
            })
            .collect();
        self.ambient.with_equations(&extra)
    }

    /// Dimension of the polyhedron, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        self.affine_hull().ok().map(|a| a.dim())
    }

    /// `true` when `x` lies in the affine hull and strictly satisfies every
    /// inequality that is not an implicit equality.
    pub fn relint_contains(&self, x: &QVector) -> bool {
        if !self.contains(x) {
            return false;
        }
        let implicit = self.implicit_equalities();
        self.inequalities
            .iter()
            .enumerate()
            .all(|(i, h)| implicit.contains(&i) || h.holds_strictly(x))
    }

    /// Relative-interior test with the implicit equalities supplied by the caller.
    pub fn relint_contains_with(&self, x: &QVector, implicit: &[usize]) -> bool {
        self.contains(x)
            && self
                .inequalities
                .iter()
                .enumerate()
                .all(|(i, h)| implicit.contains(&i) || h.holds_strictly(x))
    }

    pub fn recession(&self) -> Recession {
        let n = self.ambient_dim();
        let lin_ambient = self.ambient.linear_part();
        let cone_ineqs: Vec<Inequality> = self
            .inequalities
            .iter()
            .map(|h| Inequality::new(h.normal.clone(), Scalar::zero()))
            .collect();
        let mut rows: Vec<QVector> = self.ambient.equations().iter().map(|(a, _)| a.clone()).collect();
        rows.extend(self.inequalities.iter().map(|h| h.normal.clone()));
        let lineality = kernel_basis(&QMatrix::from_rows(&rows, n));
        Recession {
            cone: HPolyhedron::new(lin_ambient, cone_ineqs).expect("cone rows"),
            lineality,
        }
    }

    pub fn lineality(&self) -> Vec<QVector> {
        self.recession().lineality
    }

    /// Indices of inequalities whose normals vanish on the whole recession cone.
    pub fn recession_implicit(&self) -> Vec<usize> {
        let rec = self.recession();
        rec.cone.implicit_equalities()
    }

    /// `true` when the recession cone equals the lineality space.
    pub fn recession_is_lineality(&self) -> bool {
        self.recession_implicit().len() == self.inequalities.len()
    }

    pub fn is_bounded(&self) -> bool {
        self.recession().cone.dim() == Some(0)
    }

    /// Implicit equalities moved into the ambient, normals projected onto the
    /// direction space, leading coefficients scaled to `+-1`, duplicates and
    /// redundant rows removed (greedily, in order).
    pub fn canonical(&self) -> Result<HPolyhedron> {
        if self.is_empty() {
            return Err(Error::EmptyBody);
        }
        let ambient = self.affine_hull()?;
        let implicit = self.implicit_equalities();
        let p = ambient.point().clone();
        let mut rows: Vec<Inequality> = Vec::new();
        for (i, h) in self.inequalities.iter().enumerate() {
            if implicit.contains(&i) {
                continue;
            }
            let a = ambient.project_direction(&h.normal);
            // a.x = proj.x + (a - proj).p on the ambient.
            let rhs = &h.rhs - &h.normal.sub(&a).dot(&p);
            if a.is_zero() {
                continue;
            }
            let lead = a.leading().expect("nonzero");
            let k = a[lead].abs().recip();
            let h = Inequality::new(a.scale(&k), &rhs * &k);
            match rows.iter_mut().find(|r| r.normal == h.normal) {
                Some(r) => {
                    if h.rhs < r.rhs {
                        r.rhs = h.rhs;
                    }
                }
                None => rows.push(h),
            }
        }
        let mut kept = rows;
        let mut i = 0;
        while i < kept.len() {
            let mut others = kept.clone();
            let h = others.remove(i);
            let without = HPolyhedron::new(ambient.clone(), others)?;
            let redundant = matches!(without.max_value(&h.normal), Some(v) if v <= h.rhs);
            if redundant {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        HPolyhedron::new(ambient, kept)
    }

    /// One descriptor per irredundant inequality of the canonical form.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        let canon = self.canonical()?;
        Ok(canon
            .inequalities
            .iter()
            .enumerate()
            .map(|(index, h)| Facet {
                index,
                inequality: h.clone(),
                face: canon
                    .restricted(&[(h.normal.clone(), h.rhs.clone())], &[])
                    .expect("facet hyperplane meets the polyhedron"),
            })
            .collect())
    }

    /// All vertices by active-set enumeration, sorted and duplicate-free.
    pub fn vertices(&self) -> Result<Vec<QVector>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        if !self.lineality().is_empty() {
            return Err(Error::NoVertices);
        }
        let n = self.ambient_dim();
        let eq_rows: Vec<QVector> = self
            .ambient
            .independent_equations()
            .into_iter()
            .map(|(a, _)| a)
            .collect();
        let eq_rank = eq_rows.len();
        let need = n - eq_rank;
        let m = self.inequalities.len();
        let mut found: Vec<QVector> = Vec::new();
        for active in combinations(m, need) {
            let mut rows = eq_rows.clone();
            rows.extend(active.iter().map(|&i| self.inequalities[i].normal.clone()));
            if rank_of(&rows, n) != n {
                continue;
            }
            let mut rhs: Vec<Scalar> = self
                .ambient
                .independent_equations()
                .into_iter()
                .map(|(_, b)| b)
                .collect();
            rhs.extend(active.iter().map(|&i| self.inequalities[i].rhs.clone()));
            let sol = solve_linear(&QMatrix::from_rows(&rows, n), &QVector(rhs))?;
            if let LinearSolution::Unique(x) = sol {
                if self.contains(&x) && !found.contains(&x) {
                    found.push(x);
                }
            }
        }
        found.sort();
        Ok(found)
    }

    /// Image under `x = origin + M y` as a polyhedron in `y`-space (`M` is `n x m`).
    pub fn pullback(&self, origin: &QVector, m: &QMatrix) -> Result<HPolyhedron> {
        let k = m.cols();
        let mt = m.transpose();
        let eqs: Vec<(QVector, Scalar)> = self
            .ambient
            .equations()
            .iter()
            .map(|(a, b)| (mt.mul_vec(a), b - &a.dot(origin)))
            .collect();
        let ineqs = self
            .inequalities
            .iter()
            .map(|h| Inequality::new(mt.mul_vec(&h.normal), &h.rhs - &h.normal.dot(origin)))
            .collect();
        let ambient = match AffineSubspace::new(k, eqs) {
            Ok(a) => a,
            Err(Error::EmptySubspace) => {
                // Empty image: encode as an infeasible row.
                let bad = Inequality::new(QVector::zeros(k), Scalar::from_int(-1));
                return HPolyhedron::new(AffineSubspace::whole(k), vec![bad]);
            }
            Err(e) => return Err(e),
        };
        HPolyhedron::new(ambient, ineqs)
    }
}

impl fmt::Debug for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} with [", self.ambient)?;
        for (i, h) in self.inequalities.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", h.pretty())?;
        }
        write!(f, "]")
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
