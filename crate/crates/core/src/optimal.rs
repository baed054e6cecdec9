//! Optimality and KKT conditions for `min_{x in C} f(x) - <x*, x>` subject to `f_i(x) <= 0`.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::convexfn::{ExtendedValue, PolyhedralFunction};
use crate::error::{check_dim, Error, Result};
use crate::exactlp::{self, LinearProgram, LpStatus, Sense};
use crate::farkas::support::{largest_positive_support, ActiveRegion};
use crate::farkas::{member_closure, sum_closedness, Closedness, ConvexSystem};
use crate::ratgeom::HRep;
use crate::rational::{add, dot, neg, scale, zeros, QVec, Rational};

#[derive(Debug, Clone)]
pub struct PerturbedProblem {
    pub sigma: ConvexSystem,
    pub f: PolyhedralFunction,
    pub x_star: QVec,
    closedness: Arc<OnceLock<Closedness>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectSolution {
    Optimal { x: QVec, value: Rational },
    Unbounded,
    Infeasible,
}

impl PerturbedProblem {
    pub fn new(sigma: ConvexSystem, f: PolyhedralFunction, x_star: QVec) -> Result<Self> {
        check_dim(sigma.n(), f.n())?;
        check_dim(sigma.n(), x_star.len())?;
        Ok(PerturbedProblem {
            sigma,
            f,
            x_star,
            closedness: Arc::default(),
        })
    }

    /// How closedness of `epi f* + K` was established; does not depend on `x*`. Memoized.
    pub fn closedness(&self) -> Result<Closedness> {
        if let Some(c) = self.closedness.get() {
            return Ok(*c);
        }
        let c = sum_closedness(&self.f, &self.sigma)?;
        Ok(*self.closedness.get_or_init(|| c))
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// `f(x) - <x*, x>`.
    pub fn objective_at(&self, x: &[Rational]) -> Result<ExtendedValue> {
        Ok(match self.f.evaluate(x)? {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(v - dot(&self.x_star, x)),
            ExtendedValue::PlusInfinity => ExtendedValue::PlusInfinity,
        })
    }

    /// Solves the problem as one LP over `epi f ∩ (A × Q)`.
    pub fn solve_direct(&self) -> Result<DirectSolution> {
        let n = self.n();
        let region = self.f.epigraph_h()?.intersect(&self.sigma.a_h()?.embed(n + 1, 0))?;
        let mut obj = neg(&self.x_star);
        obj.push(Rational::one());
        let out = exactlp::solve(&LinearProgram::new(obj, Sense::Min, region))?;
        Ok(match out.status {
            LpStatus::Optimal => DirectSolution::Optimal {
                x: out.primal.expect("optimal point")[..n].to_vec(),
                value: out.value.expect("optimal value"),
            },
            LpStatus::Unbounded => DirectSolution::Unbounded,
            LpStatus::Infeasible => DirectSolution::Infeasible,
        })
    }

    fn value_at_feasible(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.n(), x.len())?;
        if !self.sigma.is_feasible(x)? {
            return Err(Error::PointNotFeasible);
        }
        match self.f.evaluate(x)? {
            ExtendedValue::Finite(v) => Ok(v),
            ExtendedValue::PlusInfinity => Err(Error::PointOutsideDomain),
        }
    }
}

/// `(x*, <x*, x̄> - f(x̄)) ∈ cl(epi f* + K)`.
pub fn is_optimal(p: &PerturbedProblem, x_bar: &[Rational]) -> Result<bool> {
    let fx = p.value_at_feasible(x_bar)?;
    let mut q = p.x_star.clone();
    q.push(dot(&p.x_star, x_bar) - fx);
    member_closure(&q, &p.f, &p.sigma)
}

/// `x* = u* + v* + Σ λ_j u_j` with `u* ∈ ∂f(x̄)`, `v* ∈ N_C(x̄)`, `u_j ∈ ∂f_j(x̄)`, `λ_j > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KktCertificate {
    pub j: Vec<usize>,
    pub lambda: Vec<Rational>,
    pub u_star: QVec,
    pub v_star: QVec,
    pub u_j: Vec<QVec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KktOutcome {
    pub certificate: Option<KktCertificate>,
    /// How closedness of `epi f* + K` was established. Absence of a certificate
    /// only proves non-optimality when this is not `Unverified`.
    pub closedness: Closedness,
}

impl KktOutcome {
    pub fn hypothesis_unverified(&self) -> bool {
        self.closedness == Closedness::Unverified
    }
}

fn place(total: usize, off: usize, row: &[Rational]) -> QVec {
    let mut r = zeros(total);
    r[off..off + row.len()].clone_from_slice(row);
    r
}

/// Searches for KKT multipliers at `x̄`; inactive constraints get `λ_j = 0` upfront.
pub fn kkt_find(p: &PerturbedProblem, x_bar: &[Rational]) -> Result<KktOutcome> {
    p.value_at_feasible(x_bar)?;
    let n = p.n();
    let zero = Rational::zero();
    let mut active = Vec::new();
    for i in 0..p.sigma.len() {
        if p.sigma.function(i).evaluate(x_bar)? == ExtendedValue::Finite(zero.clone()) {
            active.push(i);
        }
    }
    let df = p.f.subdifferential(x_bar)?;
    let nc = p.sigma.indicator_c()?.subdifferential(x_bar)?;
    let mut dfj: Vec<Option<HRep>> = vec![None; p.sigma.len()];
    for &j in &active {
        dfj[j] = Some(p.sigma.function(j).subdifferential(x_bar)?.h()?.clone());
    }
    let df_h = df.h()?;
    let nc_h = nc.h()?;

    let build = |set: &[usize]| -> Result<ActiveRegion> {
        let total = 2 * n + set.len() * (n + 1);
        let mut region = HRep::new(total);
        for (h, off) in [(df_h, 0), (nc_h, n)] {
            for c in &h.inequalities {
                region.push_ineq(place(total, off, &c.row), c.rhs.clone());
            }
            for c in &h.equalities {
                region.push_eq(place(total, off, &c.row), c.rhs.clone());
            }
        }
        let mut multipliers = Vec::with_capacity(set.len());
        for (k, &j) in set.iter().enumerate() {
            let off = 2 * n + k * (n + 1);
            let lam = off + n;
            multipliers.push(lam);
            let h = dfj[j].as_ref().expect("active constraint");
            let homog = |row: &[Rational], rhs: &Rational| {
                let mut r = place(total, off, row);
                r[lam] = -rhs.clone();
                r
            };
            for c in &h.inequalities {
                region.push_ineq(homog(&c.row, &c.rhs), Rational::zero());
            }
            for c in &h.equalities {
                region.push_eq(homog(&c.row, &c.rhs), Rational::zero());
            }
            let mut row = zeros(total);
            row[lam] = -Rational::one();
            region.push_ineq(row, Rational::zero());
        }
        for i in 0..n {
            let mut row = zeros(total);
            row[i] = Rational::one();
            row[n + i] = Rational::one();
            for k in 0..set.len() {
                row[2 * n + k * (n + 1) + i] = Rational::one();
            }
            region.push_eq(row, p.x_star[i].clone());
        }
        Ok(ActiveRegion { region, multipliers })
    };

    let found = largest_positive_support(&active, build)?;
    let certificate = found.map(|(set, point)| {
        let mut lambda = Vec::with_capacity(set.len());
        let mut u_j = Vec::with_capacity(set.len());
        for k in 0..set.len() {
            let off = 2 * n + k * (n + 1);
            let lam = point[off + n].clone();
            u_j.push(scale(&lam.recip(), &point[off..off + n]));
            lambda.push(lam);
        }
        KktCertificate {
            j: set,
            lambda,
            u_star: point[..n].to_vec(),
            v_star: point[n..2 * n].to_vec(),
            u_j,
        }
    });
    if let Some(c) = &certificate {
        debug_assert!(kkt_verify(p, x_bar, c));
    }
    let closedness = p.closedness()?;
    Ok(KktOutcome {
        certificate,
        closedness,
    })
}

/// Re-checks stationarity, complementary slackness and every subgradient membership exactly.
pub fn kkt_verify(p: &PerturbedProblem, x_bar: &[Rational], cert: &KktCertificate) -> bool {
    verify_inner(p, x_bar, cert).unwrap_or(false)
}

fn verify_inner(p: &PerturbedProblem, x_bar: &[Rational], cert: &KktCertificate) -> Result<bool> {
    let n = p.n();
    if p.value_at_feasible(x_bar).is_err() {
        return Ok(false);
    }
    if cert.j.len() != cert.lambda.len() || cert.j.len() != cert.u_j.len() {
        return Ok(false);
    }
    if cert.u_star.len() != n || cert.v_star.len() != n || cert.u_j.iter().any(|u| u.len() != n) {
        return Ok(false);
    }
    let mut seen = vec![false; p.sigma.len()];
    let mut sum = add(&cert.u_star, &cert.v_star);
    for ((&j, lam), u) in cert.j.iter().zip(&cert.lambda).zip(&cert.u_j) {
        if j >= p.sigma.len() || seen[j] || !lam.is_positive() {
            return Ok(false);
        }
        seen[j] = true;
        let fj = p.sigma.function(j);
        // complementary slackness
        if fj.evaluate(x_bar)? != ExtendedValue::Finite(Rational::zero()) {
            return Ok(false);
        }
        if !fj.subdifferential(x_bar)?.contains(u)? {
            return Ok(false);
        }
        sum = add(&sum, &scale(lam, u));
    }
    if sum != p.x_star {
        return Ok(false);
    }
    Ok(p.f.subdifferential(x_bar)?.contains(&cert.u_star)?
        && p.sigma.indicator_c()?.subdifferential(x_bar)?.contains(&cert.v_star)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{half_line, kkt_example, negation};
    use crate::rational::{int, ivec};

    #[test]
    fn is_optimal_examples() {
        let p = PerturbedProblem::new(half_line(), negation(), ivec(&[0])).unwrap();
        assert!(is_optimal(&p, &ivec(&[1])).unwrap());
        assert!(!is_optimal(&p, &ivec(&[0])).unwrap());
        assert_eq!(is_optimal(&p, &ivec(&[2])), Err(Error::PointNotFeasible));
        assert_eq!(
            p.solve_direct().unwrap(),
            DirectSolution::Optimal {
                x: ivec(&[1]),
                value: int(-1)
            }
        );
        let q = PerturbedProblem::new(half_line(), PolyhedralFunction::zero(1), ivec(&[0])).unwrap();
        assert!(is_optimal(&q, &ivec(&[-5])).unwrap());
    }

    #[test]
    fn kkt_examples() {
        let (sys, f) = kkt_example();
        let p = PerturbedProblem::new(sys, f, ivec(&[0, 0])).unwrap();
        let out = kkt_find(&p, &ivec(&[1, 0])).unwrap();
        let cert = out.certificate.clone().expect("optimal point has multipliers");
        assert_eq!(cert.j, vec![0]);
        assert_eq!(cert.lambda, vec![int(1)]);
        assert_eq!(cert.u_star, ivec(&[-1, 0]));
        assert_eq!(cert.u_j, vec![ivec(&[1, 0])]);
        assert_eq!(cert.v_star, ivec(&[0, 0]));
        assert!(kkt_verify(&p, &ivec(&[1, 0]), &cert));
        assert!(!out.hypothesis_unverified());

        let mut bad = cert.clone();
        bad.lambda[0] = int(2);
        assert!(!kkt_verify(&p, &ivec(&[1, 0]), &bad));

        assert!(kkt_find(&p, &ivec(&[0, 0])).unwrap().certificate.is_none());

        // multiplier on an inactive constraint
        let mut slack = cert;
        slack.u_star = ivec(&[0, 0]);
        assert!(!kkt_verify(&p, &ivec(&[0, 0]), &slack));

        let q = PerturbedProblem::new(half_line(), PolyhedralFunction::zero(1), ivec(&[0])).unwrap();
        let c = kkt_find(&q, &ivec(&[-3])).unwrap().certificate.unwrap();
        assert!(c.j.is_empty());
        assert_eq!(c.u_star, ivec(&[0]));
        assert_eq!(c.v_star, ivec(&[0]));
    }
}
