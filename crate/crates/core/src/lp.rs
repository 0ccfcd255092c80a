//! Exact primal simplex over `Q(sqrt(d))` with bounded variables and Bland's rule.
//!
//! Every outcome carries a certificate that [`LpOutcome::verify`] re-checks
//! with plain arithmetic:
//!
//! * `Optimal` carries row multipliers `y`. With `d = c - A^T y`, the bound
//!   `min_{x in bounds} d.x + min_{w in row ranges} y.w` equals the optimum.
//! * `Infeasible` carries `y` with `max_{x in bounds} (A^T y).x < min_{w} y.w`.
//! * `Unbounded` carries a feasible point and an improving recession ray.

use crate::field::{QVector, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub row: QVector,
    pub relation: Relation,
    pub rhs: Scalar,
}

/// `min c.x` subject to row constraints and per-variable bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: QVector,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Scalar>>,
    pub upper: Vec<Option<Scalar>>,
}

impl LinearProgram {
    /// `n` free variables, zero objective, no constraints.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            objective: QVector::zeros(n),
            constraints: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.dim()
    }

    pub fn minimize(mut self, c: QVector) -> Self {
        assert_eq!(c.dim(), self.num_vars());
        self.objective = c;
        self
    }

    pub fn maximize(self, c: QVector) -> Self {
        self.minimize(c.neg())
    }

    pub fn constrain(&mut self, row: QVector, relation: Relation, rhs: Scalar) {
        assert_eq!(row.dim(), self.num_vars(), "constraint row has wrong length");
        self.constraints.push(Constraint { row, relation, rhs });
    }

    pub fn le(&mut self, row: QVector, rhs: Scalar) {
        self.constrain(row, Relation::Le, rhs);
    }

    pub fn ge(&mut self, row: QVector, rhs: Scalar) {
        self.constrain(row, Relation::Ge, rhs);
    }

    pub fn equal(&mut self, row: QVector, rhs: Scalar) {
        self.constrain(row, Relation::Eq, rhs);
    }

    pub fn set_lower(&mut self, j: usize, v: Scalar) {
        self.lower[j] = Some(v);
    }

    pub fn set_upper(&mut self, j: usize, v: Scalar) {
        self.upper[j] = Some(v);
    }

    pub fn nonnegative(&mut self, j: usize) {
        self.lower[j] = Some(Scalar::zero());
    }

    fn row_range(&self, i: usize) -> (Option<Scalar>, Option<Scalar>) {
        let c = &self.constraints[i];
        match c.relation {
            Relation::Le => (None, Some(c.rhs.clone())),
            Relation::Ge => (Some(c.rhs.clone()), None),
            Relation::Eq => (Some(c.rhs.clone()), Some(c.rhs.clone())),
        }
    }

    /// `true` when `x` satisfies every row and bound exactly.
    pub fn is_feasible(&self, x: &QVector) -> bool {
        if x.dim() != self.num_vars() {
            return false;
        }
        let bounds_ok = (0..x.dim()).all(|j| {
            self.lower[j].as_ref().is_none_or(|l| &x[j] >= l)
                && self.upper[j].as_ref().is_none_or(|u| &x[j] <= u)
        });
        bounds_ok
            && self.constraints.iter().all(|c| {
                let v = c.row.dot(x);
                match c.relation {
                    Relation::Le => v <= c.rhs,
                    Relation::Ge => v >= c.rhs,
                    Relation::Eq => v == c.rhs,
                }
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        x: QVector,
        value: Scalar,
        duals: QVector,
    },
    Infeasible {
        farkas: QVector,
    },
    Unbounded {
        x: QVector,
        ray: QVector,
    },
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }

    pub fn value(&self) -> Option<&Scalar> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    /// A feasible point, when one was found.
    pub fn point(&self) -> Option<&QVector> {
        match self {
            LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x, .. } => Some(x),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    /// Re-checks the attached certificate against `lp`.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        match self {
            LpOutcome::Optimal { x, value, duals } => {
                if !lp.is_feasible(x) || &lp.objective.dot(x) != value {
                    return false;
                }
                if duals.dim() != lp.constraints.len() {
                    return false;
                }
                let mut d = lp.objective.clone();
                for (y, c) in duals.iter().zip(&lp.constraints) {
                    d = d.axpy(&-y, &c.row);
                }
                let Some(lb_x) = min_over_bounds(&d, &lp.lower, &lp.upper) else {
                    return false;
                };
                let ranges: Vec<_> = (0..lp.constraints.len()).map(|i| lp.row_range(i)).collect();
                let (lo, hi): (Vec<_>, Vec<_>) = ranges.into_iter().unzip();
                let Some(lb_w) = min_over_bounds(duals, &lo, &hi) else {
                    return false;
                };
                &(lb_x + lb_w) == value
            }
            LpOutcome::Infeasible { farkas } => {
                if farkas.dim() != lp.constraints.len() {
                    return false;
                }
                let mut aty = QVector::zeros(lp.num_vars());
                for (y, c) in farkas.iter().zip(&lp.constraints) {
                    aty = aty.axpy(y, &c.row);
                }
                let Some(max_x) = min_over_bounds(&aty.neg(), &lp.lower, &lp.upper) else {
                    return false;
                };
                let ranges: Vec<_> = (0..lp.constraints.len()).map(|i| lp.row_range(i)).collect();
                let (lo, hi): (Vec<_>, Vec<_>) = ranges.into_iter().unzip();
                let Some(min_w) = min_over_bounds(farkas, &lo, &hi) else {
                    return false;
                };
                // max (A^T y).x = -min (-A^T y).x
                -max_x < min_w
            }
            LpOutcome::Unbounded { x, ray } => {
                if !lp.is_feasible(x) || ray.dim() != lp.num_vars() {
                    return false;
                }
                if !lp.objective.dot(ray).is_negative() {
                    return false;
                }
                let bounds_ok = (0..ray.dim()).all(|j| {
                    (lp.lower[j].is_none() || !ray[j].is_negative())
                        && (lp.upper[j].is_none() || !ray[j].is_positive())
                });
                bounds_ok
                    && lp.constraints.iter().all(|c| {
                        let v = c.row.dot(ray);
                        match c.relation {
                            Relation::Le => !v.is_positive(),
                            Relation::Ge => !v.is_negative(),
                            Relation::Eq => v.is_zero(),
                        }
                    })
            }
        }
    }
}

/// `min g.z` over a box with possibly infinite sides; `None` if unbounded below.
fn min_over_bounds(g: &QVector, lower: &[Option<Scalar>], upper: &[Option<Scalar>]) -> Option<Scalar> {
    let mut total = Scalar::zero();
    for (j, gj) in g.iter().enumerate() {
        match gj.sign() {
            0 => {}
            1 => total += gj * lower[j].as_ref()?,
            _ => total += gj * upper[j].as_ref()?,
        }
    }
    Some(total)
}

struct Tableau {
    /// `m` rows over all columns: structural, logical, artificial.
    t: Vec<Vec<Scalar>>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    value: Vec<Scalar>,
    lower: Vec<Option<Scalar>>,
    upper: Vec<Option<Scalar>>,
}

enum Step {
    Optimal,
    Unbounded { entering: usize, dir: i8 },
    Moved,
}

impl Tableau {
    fn cols(&self) -> usize {
        self.value.len()
    }

    /// Recompute basic values from nonbasic ones: `z_B = -T_N z_N`.
    fn refresh_basics(&mut self) {
        for (i, &b) in self.basis.iter().enumerate() {
            let mut acc = Scalar::zero();
            for j in 0..self.cols() {
                if !self.is_basic[j] && !self.value[j].is_zero() && !self.t[i][j].is_zero() {
                    acc -= &(&self.t[i][j] * &self.value[j]);
                }
            }
            self.value[b] = acc;
        }
    }

    fn reduced_costs(&self, cost: &[Scalar]) -> Vec<Scalar> {
        (0..self.cols())
            .map(|j| {
                if self.is_basic[j] {
                    return Scalar::zero();
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                        d -= &(&cost[b] * &self.t[i][j]);
                    }
                }
                d
            })
            .collect()
    }

    fn is_fixed(&self, j: usize) -> bool {
        matches!((&self.lower[j], &self.upper[j]), (Some(l), Some(u)) if l == u)
    }

    fn step(&mut self, cost: &[Scalar]) -> Step {
        let d = self.reduced_costs(cost);
        // Bland: lowest-index improving nonbasic column.
        let mut choice = None;
        for j in 0..self.cols() {
            if self.is_basic[j] || self.is_fixed(j) || d[j].is_zero() {
                continue;
            }
            let at_lower = self.lower[j].as_ref() == Some(&self.value[j]);
            let at_upper = self.upper[j].as_ref() == Some(&self.value[j]);
            let dir = if d[j].is_negative() { 1 } else { -1 };
            let can_move = if dir > 0 { !at_upper } else { !at_lower };
            if can_move {
                choice = Some((j, dir));
                break;
            }
        }
        let Some((entering, dir)) = choice else {
            return Step::Optimal;
        };
        let dir_s = Scalar::from_int(dir as i64);

        // Ratio test; ties go to the lowest variable index.
        let mut best: Option<(Scalar, usize, Option<usize>)> = None;
        let mut consider = |limit: Scalar, var: usize, row: Option<usize>| {
            let better = match &best {
                None => true,
                Some((t, v, _)) => limit < *t || (&limit == t && var < *v),
            };
            if better {
                best = Some((limit, var, row));
            }
        };
        let own = if dir > 0 {
            self.upper[entering].as_ref().map(|u| u - &self.value[entering])
        } else {
            self.lower[entering].as_ref().map(|l| &self.value[entering] - l)
        };
        if let Some(limit) = own {
            consider(limit, entering, None);
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if self.t[i][entering].is_zero() {
                continue;
            }
            let rate = -(&self.t[i][entering] * &dir_s);
            if rate.is_positive() {
                if let Some(u) = &self.upper[b] {
                    consider(&(u - &self.value[b]) / &rate, b, Some(i));
                }
            } else if let Some(l) = &self.lower[b] {
                consider(&(l - &self.value[b]) / &rate, b, Some(i));
            }
        }
        let Some((step, _, row)) = best else {
            return Step::Unbounded { entering, dir };
        };
        match row {
            None => {
                self.value[entering] = if dir > 0 {
                    self.upper[entering].clone().expect("bounded flip")
                } else {
                    self.lower[entering].clone().expect("bounded flip")
                };
            }
            Some(r) => {
                let leaving = self.basis[r];
                let rate = -(&self.t[r][entering] * &dir_s);
                let target = if rate.is_positive() {
                    self.upper[leaving].clone()
                } else {
                    self.lower[leaving].clone()
                }
                .expect("blocking bound exists");
                self.value[entering] = &self.value[entering] + &(&dir_s * &step);
                self.pivot(r, entering);
                self.value[leaving] = target;
            }
        }
        self.refresh_basics();
        Step::Moved
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.t[r][col].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let k = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&k * p);
                }
            }
        }
        let leaving = self.basis[r];
        self.is_basic[leaving] = false;
        self.is_basic[col] = true;
        self.basis[r] = col;
    }

    fn run(&mut self, cost: &[Scalar]) -> Step {
        loop {
            match self.step(cost) {
                Step::Moved => continue,
                other => return other,
            }
        }
    }

    /// Row multipliers `y = c_B B^{-1}` for the first `m` logical columns.
    fn duals(&self, cost: &[Scalar], n: usize, m: usize) -> QVector {
        (0..m)
            .map(|i| {
                let mut y = Scalar::zero();
                for (k, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() {
                        y -= &(&cost[b] * &self.t[k][n + i]);
                    }
                }
                y
            })
            .collect()
    }
}

/// Solves `lp` exactly. Deterministic for a given input ordering.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let m = lp.constraints.len();

    let mut lower: Vec<Option<Scalar>> = lp.lower.clone();
    let mut upper: Vec<Option<Scalar>> = lp.upper.clone();
    for i in 0..m {
        let (lo, hi) = lp.row_range(i);
        lower.push(lo);
        upper.push(hi);
    }

    // Structural variables start at the bound nearest zero.
    let mut value: Vec<Scalar> = (0..n)
        .map(|j| match (&lp.lower[j], &lp.upper[j]) {
            (None, None) => Scalar::zero(),
            (Some(l), None) => l.clone(),
            (None, Some(u)) => u.clone(),
            (Some(l), Some(u)) => {
                if u.abs() < l.abs() {
                    u.clone()
                } else {
                    l.clone()
                }
            }
        })
        .collect();

    let x0: QVector = value.clone().into();
    let mut artificial_rows = Vec::new();
    let mut row_sign = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let w = c.row.dot(&x0);
        let lo = &lower[n + i];
        let hi = &upper[n + i];
        if let Some(l) = lo.as_ref().filter(|l| &w < *l) {
            // a.x - w + s t = 0 with w held at l: t = (l - a.x) / s > 0.
            artificial_rows.push(i);
            row_sign.push(Some((l.clone(), 1i64)));
        } else if let Some(h) = hi.as_ref().filter(|h| &w > *h) {
            artificial_rows.push(i);
            row_sign.push(Some((h.clone(), -1i64)));
        } else {
            row_sign.push(None);
        }
        value.push(w);
    }
    let k = artificial_rows.len();
    let total = n + m + k;
    for _ in 0..k {
        lower.push(Some(Scalar::zero()));
        upper.push(None);
        value.push(Scalar::zero());
    }

    let mut t = vec![vec![Scalar::zero(); total]; m];
    let mut basis = vec![0; m];
    let mut is_basic = vec![false; total];
    let mut art_index = 0;
    for (i, c) in lp.constraints.iter().enumerate() {
        match &row_sign[i] {
            None => {
                for j in 0..n {
                    t[i][j] = -&c.row[j];
                }
                t[i][n + i] = Scalar::one();
                basis[i] = n + i;
            }
            Some((bound, sign)) => {
                let s = Scalar::from_int(*sign);
                for j in 0..n {
                    t[i][j] = &c.row[j] * &s;
                }
                t[i][n + i] = -&s;
                let a = n + m + art_index;
                t[i][a] = Scalar::one();
                basis[i] = a;
                value[n + i] = bound.clone();
                art_index += 1;
            }
        }
        is_basic[basis[i]] = true;
    }

    let mut tab = Tableau {
        t,
        basis,
        is_basic,
        value,
        lower,
        upper,
    };
    tab.refresh_basics();

    if k > 0 {
        let mut cost1 = vec![Scalar::zero(); total];
        for c in cost1.iter_mut().skip(n + m) {
            *c = Scalar::one();
        }
        match tab.run(&cost1) {
            Step::Optimal => {}
            _ => unreachable!("phase one is bounded below by zero"),
        }
        let infeas: Scalar = (n + m..total).map(|j| tab.value[j].clone()).sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible {
                farkas: tab.duals(&cost1, n, m),
            };
        }
        for j in n + m..total {
            tab.upper[j] = Some(Scalar::zero());
        }
    }

    let mut cost2 = vec![Scalar::zero(); total];
    for j in 0..n {
        cost2[j] = lp.objective[j].clone();
    }
    let x_of = |tab: &Tableau| -> QVector { tab.value[..n].to_vec().into() };
    match tab.run(&cost2) {
        Step::Optimal => {
            let x = x_of(&tab);
            let value = lp.objective.dot(&x);
            LpOutcome::Optimal {
                x,
                value,
                duals: tab.duals(&cost2, n, m),
            }
        }
        Step::Unbounded { entering, dir } => {
            let dir_s = Scalar::from_int(dir as i64);
            let mut ray = QVector::zeros(n);
            if entering < n {
                ray[entering] = dir_s.clone();
            }
            for (i, &b) in tab.basis.iter().enumerate() {
                if b < n {
                    ray[b] = -(&tab.t[i][entering] * &dir_s);
                }
            }
            LpOutcome::Unbounded { x: x_of(&tab), ray }
        }
        Step::Moved => unreachable!(),
    }
}
