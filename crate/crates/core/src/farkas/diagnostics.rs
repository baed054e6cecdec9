use num_traits::{One, Signed, Zero};

use super::membership::{closure_decomposition, exact_with, member_closure, member_exact, Decomposition};
use super::{ConsequenceVerdict, ConvexSystem, FarkasCertificate, Verdict};
use crate::convexfn::PolyhedralFunction;
use crate::error::{check_dim, Error, Result};
use crate::exactlp::{self, Bound, LinearProgram, LpStatus, Sense};
use crate::ratgeom::{Constraint, HRep, Polyhedron};
use crate::rational::{add, dot, neg, primitive, scale, zeros, QVec, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HiddenAssumption {
    /// A point of `A ∩ dom f`.
    Holds(QVec),
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenDiagnosis {
    pub system_consistent: bool,
    /// Direction `d` of `A` with `f∞(d) < <x*, d>`, when one exists.
    pub recession_witness: Option<QVec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotFmReason {
    EmptySolutionSet,
    /// A generator of `cl K` that is not in `K`.
    OpenCone { offending_ray: QVec },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FmStatus {
    Fm,
    NotFm(NotFmReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency {
    Consistent(QVec),
    /// Decomposition of `(0, -1)` over the closure of `K`.
    Inconsistent(Decomposition),
}

/// How closedness of `epi f* + K` was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closedness {
    /// σ is FM and `f` is finite everywhere.
    FarkasMinkowskiRealValued,
    /// Every generator of the closure was found in the set itself.
    GeneratorsInSet,
    Unverified,
}

fn zero() -> Rational {
    Rational::zero()
}

/// `epi f ∩ (A × Q)` in the variables `(x, t)`.
fn primal_region(f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<HRep> {
    let n = sigma.n();
    check_dim(n, f.n())?;
    f.epigraph_h()?.intersect(&sigma.a_h()?.embed(n + 1, 0))
}

pub fn hidden_assumption(f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<HiddenAssumption> {
    let region = primal_region(f, sigma)?;
    Ok(match exactlp::feasible_point(&region)? {
        Some(p) => HiddenAssumption::Holds(p[..sigma.n()].to_vec()),
        None => HiddenAssumption::Fails,
    })
}

/// Some `x in A` with `f(x) - <x*, x> < s`.
pub fn find_violation(
    f: &PolyhedralFunction,
    x_star: &[Rational],
    s: &Rational,
    sigma: &ConvexSystem,
) -> Result<Option<QVec>> {
    let n = sigma.n();
    check_dim(n, x_star.len())?;
    let region = primal_region(f, sigma)?;
    let mut obj = neg(x_star);
    obj.push(Rational::one());
    let out = exactlp::solve(&LinearProgram::new(obj.clone(), Sense::Min, region))?;
    match out.status {
        LpStatus::Infeasible => Err(Error::HiddenAssumptionFails),
        LpStatus::Optimal => {
            let v = out.value.expect("optimal value");
            Ok((v < *s).then(|| out.primal.expect("optimal point")[..n].to_vec()))
        }
        LpStatus::Unbounded => {
            let p = out.primal.expect("feasible point");
            let d = out.ray.expect("improving ray");
            let at_p = dot(&obj, &p);
            let slope = -dot(&obj, &d);
            // smallest whole step that drops the objective below s
            let gap = (&at_p - s) / &slope;
            let k = if gap.is_negative() {
                zero()
            } else {
                gap.floor() + Rational::one()
            };
            let x = add(&p, &scale(&k, &d));
            Ok(Some(x[..n].to_vec()))
        }
    }
}

/// The full query pipeline: hidden assumption, exact certificate, closure, violation.
pub fn check_consequence(
    f: &PolyhedralFunction,
    x_star: &[Rational],
    s: &Rational,
    sigma: &ConvexSystem,
) -> Result<ConsequenceVerdict> {
    check_dim(sigma.n(), x_star.len())?;
    let wrap = |verdict| ConsequenceVerdict {
        verdict,
        x_star: x_star.to_vec(),
        s: s.clone(),
    };
    if hidden_assumption(f, sigma)? == HiddenAssumption::Fails {
        let diagnosis = HiddenDiagnosis {
            system_consistent: consistency_primal(sigma)?.is_some(),
            recession_witness: recession_witness(f, sigma, x_star)?,
        };
        return Ok(wrap(Verdict::VacuousHiddenAssumptionFails(diagnosis)));
    }
    let mut q = x_star.to_vec();
    q.push(-s);
    if let Some(d) = member_exact(&q, f, sigma)? {
        let cert = FarkasCertificate::from_decomposition(&d, f, sigma, x_star, s)?;
        return Ok(wrap(Verdict::CertifiedConsequence(cert)));
    }
    if member_closure(&q, f, sigma)? {
        return Ok(wrap(Verdict::AsymptoticConsequence));
    }
    let witness = find_violation(f, x_star, s, sigma)?
        .expect("outside the closure under the hidden assumption means a violation exists");
    Ok(wrap(Verdict::NotConsequence { witness }))
}

fn sum_all(dim: usize, parts: impl IntoIterator<Item = Result<Polyhedron>>) -> Result<Polyhedron> {
    let mut acc = Polyhedron::point(zeros(dim));
    for p in parts {
        acc = acc.minkowski_sum(&p?)?;
    }
    Ok(acc)
}

/// `cl cone Ω = Σ_i cl cone(dom f_i*)`.
pub fn omega_cone(sigma: &ConvexSystem) -> Result<Polyhedron> {
    sum_all(
        sigma.n(),
        sigma
            .constraints()
            .iter()
            .map(|c| c.f.conjugate()?.domain()?.closed_conic_hull()),
    )
}

/// `cl cone Δ = Σ_i cl cone(epi f_i*)`.
pub fn cone_delta_closure(sigma: &ConvexSystem) -> Result<Polyhedron> {
    let k = sigma.characteristic_cone()?;
    sum_all(sigma.n() + 1, k.pieces.iter().map(Polyhedron::closed_conic_hull))
}

fn barrier_c(sigma: &ConvexSystem) -> Result<Polyhedron> {
    sigma.indicator_c()?.conjugate()?.domain()
}

/// `dom f* + cl cone Ω + barr C`.
pub fn dual_domain_sum(f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<Polyhedron> {
    f.conjugate()?
        .domain()?
        .minkowski_sum(&omega_cone(sigma)?)?
        .minkowski_sum(&barrier_c(sigma)?)
}

/// `cl(epi f* + K) = epi f* + cl K`.
pub fn epi_sum_closure(f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<Polyhedron> {
    let k = sigma.characteristic_cone()?;
    f.conjugate()?.epigraph().minkowski_sum(k.closure()?)
}

/// Whether `cl(epi f* + K)` is the cylinder `(dom f* + cl cone Ω + barr C) × Q`.
pub fn verify_cylinder_identity(f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<bool> {
    let lhs = epi_sum_closure(f, sigma)?;
    let rhs = dual_domain_sum(f, sigma)?.lift_line()?;
    lhs.equals(&rhs)
}

/// A direction `d` of `recc C ∩ ∩_i [f_i∞ <= 0]` with `f∞(d) < <x*, d>`,
/// found by maximizing `<x*, d> - t` over `(d, t) in epi f∞` with `d` in the unit box.
pub fn recession_witness(f: &PolyhedralFunction, sigma: &ConvexSystem, x_star: &[Rational]) -> Result<Option<QVec>> {
    let n = sigma.n();
    check_dim(n, x_star.len())?;
    if let HiddenAssumption::Holds(_) = hidden_assumption(f, sigma)? {
        return Err(Error::PremiseViolated("A ∩ dom f is nonempty"));
    }
    let homog = |h: &HRep| -> HRep {
        let z = |c: &Constraint| Constraint {
            row: c.row.clone(),
            rhs: zero(),
        };
        HRep {
            dim: h.dim,
            inequalities: h.inequalities.iter().map(z).collect(),
            equalities: h.equalities.iter().map(z).collect(),
        }
    };
    let mut region = homog(f.epigraph_h()?);
    region = region.intersect(&homog(sigma.c().h()?).embed(n + 1, 0))?;
    for c in sigma.constraints() {
        // [f_i∞ <= 0] is the polar of dom f_i*
        let level = c.f.conjugate()?.domain()?.polar()?;
        region = region.intersect(&level.h()?.embed(n + 1, 0))?;
    }
    let mut obj = x_star.to_vec();
    obj.push(-Rational::one());
    let mut lp = LinearProgram::new(obj, Sense::Max, region);
    lp.bounds = vec![Bound::default(); n + 1];
    for b in lp.bounds.iter_mut().take(n) {
        b.lower = Some(-Rational::one());
        b.upper = Some(Rational::one());
    }
    let out = exactlp::solve(&lp)?;
    match out.status {
        LpStatus::Optimal if out.value.as_ref().is_some_and(Signed::is_positive) => {
            Ok(Some(primitive(&out.primal.expect("optimal point")[..n])))
        }
        LpStatus::Optimal => Ok(None),
        LpStatus::Infeasible => unreachable!("the origin is always feasible"),
        LpStatus::Unbounded => unreachable!("proper recession function is bounded below on a box"),
    }
}

pub fn consistency_primal(sigma: &ConvexSystem) -> Result<Option<QVec>> {
    exactlp::feasible_point(sigma.a_h()?)
}

/// Decomposition of `(0, -1)` over `cl K`, present exactly when σ has no solution.
pub fn consistency_dual(sigma: &ConvexSystem) -> Result<Option<Decomposition>> {
    let mut q = zeros(sigma.n());
    q.push(-Rational::one());
    closure_decomposition(&q, None, sigma)
}

pub fn is_consistent(sigma: &ConvexSystem) -> Result<Consistency> {
    let primal = consistency_primal(sigma)?;
    let dual = consistency_dual(sigma)?;
    debug_assert_eq!(primal.is_some(), dual.is_none(), "consistency routes disagree");
    Ok(match (primal, dual) {
        (Some(x), _) => Consistency::Consistent(x),
        (None, Some(d)) => Consistency::Inconsistent(d),
        (None, None) => unreachable!("an empty solution set always has a dual certificate"),
    })
}

/// Whether `cl K = (cl cone Ω + barr C) × Q`, which holds exactly for inconsistent systems.
pub fn inconsistency_cone_identity(sigma: &ConvexSystem) -> Result<bool> {
    let k = sigma.characteristic_cone()?;
    let rhs = omega_cone(sigma)?.minkowski_sum(&barrier_c(sigma)?)?.lift_line()?;
    k.closure()?.equals(&rhs)
}

/// `cl K`, which equals `epi δ_A*` whenever `A` is nonempty.
pub fn epi_delta_a(sigma: &ConvexSystem) -> Result<Polyhedron> {
    if consistency_primal(sigma)?.is_none() {
        return Err(Error::InconsistentSystem);
    }
    Ok(sigma.characteristic_cone()?.closure()?.clone())
}

/// `epi δ_A*` computed directly from `A`.
pub fn delta_a_conjugate_epigraph(sigma: &ConvexSystem) -> Result<Polyhedron> {
    let a = sigma.a()?;
    if a.is_empty()? {
        return Err(Error::InconsistentSystem);
    }
    Ok(PolyhedralFunction::indicator(&a)?.conjugate()?.epigraph().clone())
}

/// FM: `A` nonempty and `K` closed. `K` is closed iff every generator of `cl K` lies in `K`.
pub fn is_farkas_minkowski(sigma: &ConvexSystem) -> Result<FmStatus> {
    if consistency_primal(sigma)?.is_none() {
        return Ok(FmStatus::NotFm(NotFmReason::EmptySolutionSet));
    }
    let closure = sigma.characteristic_cone()?.closure()?;
    let v = closure.v()?;
    let mut candidates: Vec<QVec> = v.rays.clone();
    for l in &v.lineality {
        candidates.push(l.clone());
        candidates.push(neg(l));
    }
    for g in candidates {
        if exact_with(&g, None, sigma)?.is_none() {
            return Ok(FmStatus::NotFm(NotFmReason::OpenCone {
                offending_ray: primitive(&g),
            }));
        }
    }
    Ok(FmStatus::Fm)
}

/// Tries to establish that `epi f* + K` is closed.
pub fn sum_closedness(f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<Closedness> {
    if is_farkas_minkowski(sigma)? == FmStatus::Fm && f.is_real_valued()? {
        return Ok(Closedness::FarkasMinkowskiRealValued);
    }
    let closure = epi_sum_closure(f, sigma)?;
    let v = closure.v()?;
    for p in &v.points {
        if member_exact(p, f, sigma)?.is_none() {
            return Ok(Closedness::Unverified);
        }
    }
    // directions must lie in recc(epi f*) + K, which recedes from epi f* + K
    let conj = f.conjugate()?;
    let recc = conj.epigraph().recession_cone()?;
    let recc_h = recc.h()?;
    let mut dirs: Vec<QVec> = v.rays.clone();
    for l in &v.lineality {
        dirs.push(l.clone());
        dirs.push(neg(l));
    }
    for d in dirs {
        if exact_with(&d, Some(recc_h), sigma)?.is_none() {
            return Ok(Closedness::Unverified);
        }
    }
    Ok(Closedness::GeneratorsInSet)
}
