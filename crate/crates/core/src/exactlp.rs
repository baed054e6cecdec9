//! Exact rational linear programming.
//!
//! Dense two-phase simplex with Bland's rule. Every outcome carries a
//! certificate that can be re-checked with [`LpOutcome::verify`]:
//! optimal solutions come with Lagrange multipliers closing the duality gap,
//! infeasible programs with a Farkas combination of rows, unbounded programs
//! with a feasible point and an improving ray.
//!
//! Multiplier convention: for a program with inequality rows `A x <= b`
//! (constraint rows first, then expanded variable bounds) and equality rows
//! `E x = d`, multipliers `(y, z)` with `y >= 0` satisfy `c + A'y + E'z = 0`
//! when minimizing and `c = A'y + E'z` when maximizing.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};
use crate::rational::{dot, zeros, QVec, Rational};
use crate::ratgeom::{Constraint, HRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: QVec,
    pub sense: Sense,
    pub constraints: HRep,
    /// Per-variable bounds; empty means every variable is free.
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal solution, or a feasible point when unbounded.
    pub primal: Option<QVec>,
    pub value: Option<Rational>,
    /// Multipliers for the inequality rows followed by the equality rows.
    pub dual: Option<QVec>,
    /// Improving recession direction when unbounded.
    pub ray: Option<QVec>,
    /// Farkas multipliers (same layout as `dual`) when infeasible.
    pub farkas: Option<QVec>,
}

impl LinearProgram {
    pub fn new(objective: QVec, sense: Sense, constraints: HRep) -> Self {
        LinearProgram {
            objective,
            sense,
            constraints,
            bounds: Vec::new(),
        }
    }

    pub fn feasibility(constraints: HRep) -> Self {
        let n = constraints.dim;
        LinearProgram::new(zeros(n), Sense::Min, constraints)
    }

    pub fn dim(&self) -> usize {
        self.constraints.dim
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        check_dim(n, self.objective.len())?;
        self.constraints.validate()?;
        if !self.bounds.is_empty() {
            check_dim(n, self.bounds.len())?;
        }
        Ok(())
    }

    /// Inequality rows including the expanded variable bounds.
    pub fn inequality_rows(&self) -> Vec<Constraint> {
        let n = self.dim();
        let mut rows = self.constraints.inequalities.clone();
        for (j, b) in self.bounds.iter().enumerate() {
            if let Some(l) = &b.lower {
                let mut row = zeros(n);
                row[j] = -Rational::one();
                rows.push(Constraint { row, rhs: -l });
            }
            if let Some(u) = &b.upper {
                let mut row = zeros(n);
                row[j] = Rational::one();
                rows.push(Constraint { row, rhs: u.clone() });
            }
        }
        rows
    }
}

struct Tableau {
    rows: Vec<QVec>,
    rhs: QVec,
    basis: Vec<usize>,
    /// Reduced costs for the current objective.
    cost_row: QVec,
    costs: QVec,
}

impl Tableau {
    fn reset_costs(&mut self, costs: QVec) {
        let ncols = costs.len();
        let mut red = costs.clone();
        for (k, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, r) in red.iter_mut().enumerate().take(ncols) {
                *r -= cb * &self.rows[k][j];
            }
        }
        self.cost_row = red;
        self.costs = costs;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut() {
                *x *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r {
                continue;
            }
            let f = self.rows[k][c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in self.rows[k].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[k] -= &f * &prhs;
        }
        let f = self.cost_row[c].clone();
        if !f.is_zero() {
            for (x, y) in self.cost_row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule. Returns `Err(column)` if the column proves unboundedness.
    fn optimize(&mut self, allowed: usize) -> std::result::Result<(), usize> {
        loop {
            let entering = (0..allowed).find(|&j| self.cost_row[j].is_negative());
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for k in 0..self.rows.len() {
                let a = &self.rows[k][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[k] / a;
                best = match best {
                    None => Some((k, ratio)),
                    Some((bk, br)) => {
                        if ratio < br || (ratio == br && self.basis[k] < self.basis[bk]) {
                            Some((k, ratio))
                        } else {
                            Some((bk, br))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(c),
            }
        }
    }

    fn column_values(&self, ncols: usize) -> QVec {
        let mut w = zeros(ncols);
        for (k, &b) in self.basis.iter().enumerate() {
            w[b] = self.rhs[k].clone();
        }
        w
    }

    /// `c_B' B^{-1}` read off the columns that formed the initial identity.
    fn simplex_multipliers(&self, identity_cols: &[usize]) -> QVec {
        identity_cols
            .iter()
            .map(|&col| {
                self.basis
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (k, &b)| {
                        acc + &self.costs[b] * &self.rows[k][col]
                    })
            })
            .collect()
    }
}

/// Solves the program exactly. Deterministic for a given input.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.dim();
    let ineqs = lp.inequality_rows();
    let eqs = &lp.constraints.equalities;
    let m_in = ineqs.len();
    let m = m_in + eqs.len();
    let n_real = 2 * n + m_in;

    // Rows of the standard form [A -A I; E -E 0] w = (b; d), w >= 0,
    // flipped where the right-hand side is negative.
    let mut signs = vec![Rational::one(); m];
    let mut rows: Vec<QVec> = Vec::with_capacity(m);
    let mut rhs: QVec = Vec::with_capacity(m);
    for (i, c) in ineqs.iter().chain(eqs.iter()).enumerate() {
        let flip = c.rhs.is_negative();
        let s = if flip { -Rational::one() } else { Rational::one() };
        let mut row = zeros(n_real);
        for j in 0..n {
            row[j] = &s * &c.row[j];
            row[n + j] = -&row[j];
        }
        if i < m_in {
            row[2 * n + i] = s.clone();
        }
        rows.push(row);
        rhs.push(&s * &c.rhs);
        signs[i] = s;
    }

    // Initial identity: slacks of unflipped inequalities, artificials elsewhere.
    let mut identity_cols = vec![0usize; m];
    let mut n_art = 0;
    for i in 0..m {
        if i < m_in && signs[i].is_positive() {
            identity_cols[i] = 2 * n + i;
        } else {
            identity_cols[i] = n_real + n_art;
            n_art += 1;
        }
    }
    let ncols = n_real + n_art;
    for row in rows.iter_mut() {
        row.resize(ncols, Rational::zero());
    }
    for i in 0..m {
        let col = identity_cols[i];
        if col >= n_real {
            rows[i][col] = Rational::one();
        }
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: identity_cols.clone(),
        cost_row: Vec::new(),
        costs: Vec::new(),
    };

    let to_original = |pi: &QVec| -> QVec {
        pi.iter()
            .zip(&signs)
            .map(|(p, s)| -(p * s))
            .collect::<QVec>()
    };

    if n_art > 0 {
        let mut c1 = zeros(ncols);
        for c in c1.iter_mut().skip(n_real) {
            *c = Rational::one();
        }
        tab.reset_costs(c1);
        tab.optimize(ncols)
            .expect("phase one objective is bounded below by zero");
        let infeas: Rational = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n_real)
            .fold(Rational::zero(), |acc, (k, _)| acc + &tab.rhs[k]);
        if infeas.is_positive() {
            let pi = tab.simplex_multipliers(&identity_cols);
            let out = LpOutcome {
                status: LpStatus::Infeasible,
                primal: None,
                value: None,
                dual: None,
                ray: None,
                farkas: Some(to_original(&pi)),
            };
            debug_assert!(out.verify(lp));
            return Ok(out);
        }
        // Drive zero-level artificials out where a real column allows it.
        for k in 0..tab.rows.len() {
            if tab.basis[k] < n_real {
                continue;
            }
            if let Some(j) = (0..n_real).find(|&j| !tab.rows[k][j].is_zero()) {
                tab.pivot(k, j);
            }
        }
    }

    let mut c2 = zeros(ncols);
    for j in 0..n {
        let c = match lp.sense {
            Sense::Min => lp.objective[j].clone(),
            Sense::Max => -lp.objective[j].clone(),
        };
        c2[n + j] = -c.clone();
        c2[j] = c;
    }
    tab.reset_costs(c2);
    let result = tab.optimize(n_real);

    let w = tab.column_values(ncols);
    let x: QVec = (0..n).map(|j| &w[j] - &w[n + j]).collect();
    let out = match result {
        Ok(()) => {
            let pi = tab.simplex_multipliers(&identity_cols);
            let value = dot(&lp.objective, &x);
            // For a maximization the internal costs are -c, which yields the
            // `c = A'y + E'z` convention directly.
            let dual = to_original(&pi);
            LpOutcome {
                status: LpStatus::Optimal,
                primal: Some(x),
                value: Some(value),
                dual: Some(dual),
                ray: None,
                farkas: None,
            }
        }
        Err(col) => {
            let mut dir = zeros(ncols);
            dir[col] = Rational::one();
            for (k, &b) in tab.basis.iter().enumerate() {
                dir[b] = -tab.rows[k][col].clone();
            }
            let ray: QVec = (0..n).map(|j| &dir[j] - &dir[n + j]).collect();
            LpOutcome {
                status: LpStatus::Unbounded,
                primal: Some(x),
                value: None,
                dual: None,
                ray: Some(ray),
                farkas: None,
            }
        }
    };
    debug_assert!(out.verify(lp), "lp certificate failed self-check");
    Ok(out)
}

impl LpOutcome {
    /// Re-checks the attached certificate with exact arithmetic.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        let ineqs = lp.inequality_rows();
        let eqs = &lp.constraints.equalities;
        let n = lp.dim();
        let feasible = |x: &QVec| {
            x.len() == n
                && ineqs.iter().all(|c| dot(&c.row, x) <= c.rhs)
                && eqs.iter().all(|c| dot(&c.row, x) == c.rhs)
        };
        // sum of multipliers times rows and right-hand sides
        let combine = |mult: &QVec| -> Option<(QVec, Rational)> {
            if mult.len() != ineqs.len() + eqs.len() {
                return None;
            }
            if mult[..ineqs.len()].iter().any(Signed::is_negative) {
                return None;
            }
            let mut g = zeros(n);
            let mut r = Rational::zero();
            for (y, c) in mult.iter().zip(ineqs.iter().chain(eqs.iter())) {
                if y.is_zero() {
                    continue;
                }
                for (gj, aj) in g.iter_mut().zip(&c.row) {
                    *gj += y * aj;
                }
                r += y * &c.rhs;
            }
            Some((g, r))
        };
        match self.status {
            LpStatus::Optimal => {
                let (Some(x), Some(v), Some(d)) = (&self.primal, &self.value, &self.dual) else {
                    return false;
                };
                let Some((g, r)) = combine(d) else {
                    return false;
                };
                if !feasible(x) || dot(&lp.objective, x) != *v {
                    return false;
                }
                match lp.sense {
                    Sense::Min => {
                        g.iter().zip(&lp.objective).all(|(a, c)| (a + c).is_zero()) && *v == -r
                    }
                    Sense::Max => g == lp.objective && *v == r,
                }
            }
            LpStatus::Infeasible => {
                let Some(y) = &self.farkas else {
                    return false;
                };
                match combine(y) {
                    Some((g, r)) => g.iter().all(Zero::is_zero) && r.is_negative(),
                    None => false,
                }
            }
            LpStatus::Unbounded => {
                let (Some(x), Some(d)) = (&self.primal, &self.ray) else {
                    return false;
                };
                if !feasible(x) || d.len() != n {
                    return false;
                }
                let recedes = ineqs.iter().all(|c| !dot(&c.row, d).is_positive())
                    && eqs.iter().all(|c| dot(&c.row, d).is_zero());
                let slope = dot(&lp.objective, d);
                recedes
                    && match lp.sense {
                        Sense::Min => slope.is_negative(),
                        Sense::Max => slope.is_positive(),
                    }
            }
        }
    }
}

/// A point of the region, or `None` when it is empty.
pub fn feasible_point(region: &HRep) -> Result<Option<QVec>> {
    let out = solve(&LinearProgram::feasibility(region.clone()))?;
    Ok(match out.status {
        LpStatus::Infeasible => None,
        _ => out.primal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positivity {
    CanBePositive(QVec),
    StuckAtZero,
}

/// Whether coordinate `coord` can take a positive value over the region.
pub fn sup_positive(region: &HRep, coord: usize) -> Result<Positivity> {
    let n = region.dim;
    if coord >= n {
        return Err(crate::Error::DimensionMismatch {
            expected: n,
            found: coord + 1,
        });
    }
    let lp = LinearProgram::new(crate::rational::unit(n, coord), Sense::Max, region.clone());
    let out = solve(&lp)?;
    match out.status {
        LpStatus::Infeasible => Err(crate::Error::EmptyRegion),
        LpStatus::Unbounded => {
            let p = out.primal.expect("feasible point");
            if p[coord].is_positive() {
                return Ok(Positivity::CanBePositive(p));
            }
            // one step along the improving ray is enough
            let d = out.ray.expect("improving ray");
            let step = (Rational::one() - &p[coord]) / &d[coord];
            Ok(Positivity::CanBePositive(crate::rational::add(&p, &crate::rational::scale(&step, &d))))
        }
        LpStatus::Optimal => {
            if out.value.as_ref().is_some_and(Signed::is_positive) {
                Ok(Positivity::CanBePositive(out.primal.unwrap()))
            } else {
                Ok(Positivity::StuckAtZero)
            }
        }
    }
}
