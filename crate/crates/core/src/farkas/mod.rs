//! Convex systems `{f_i(x) <= 0 (i in I), x in C}` and their characteristic cone
//! `K = epi δ_C* + cone(∪ epi f_i*)`: consequence queries, finite multiplier
//! certificates, constraint qualification and hidden-assumption diagnostics.

mod certificate;
mod diagnostics;
mod membership;
pub(crate) mod support;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::convexfn::PolyhedralFunction;
use crate::error::{check_dim, Error, Result};
use crate::ratgeom::{HRep, Polyhedron};
use crate::rational::{QVec, Rational};

pub use certificate::{FarkasCertificate, Multiplier};
pub use diagnostics::{
    check_consequence, cone_delta_closure, consistency_dual, consistency_primal, delta_a_conjugate_epigraph,
    dual_domain_sum, epi_delta_a, epi_sum_closure, find_violation, hidden_assumption, is_consistent,
    is_farkas_minkowski, omega_cone, inconsistency_cone_identity, recession_witness, sum_closedness, verify_cylinder_identity,
    Closedness, Consistency, FmStatus, HiddenAssumption, HiddenDiagnosis, NotFmReason,
};
pub use membership::{closure_decomposition, member_closure, member_cone, member_exact, ConeTerm, Decomposition};

#[derive(Debug, Clone)]
pub struct SystemConstraint {
    pub name: String,
    pub f: PolyhedralFunction,
}

#[derive(Default)]
struct Derived {
    b: OnceLock<HRep>,
    a: OnceLock<HRep>,
    delta_c: OnceLock<PolyhedralFunction>,
    cone: OnceLock<CharacteristicCone>,
}

/// The system `σ = {f_i(x) <= 0, i in I; x in C}` over `Q^n`.
#[derive(Clone)]
pub struct ConvexSystem {
    n: usize,
    c: Polyhedron,
    constraints: Vec<SystemConstraint>,
    derived: Arc<Derived>,
}

impl fmt::Debug for ConvexSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexSystem")
            .field("n", &self.n)
            .field("c", &self.c)
            .field("constraints", &self.constraints)
            .finish()
    }
}

impl ConvexSystem {
    /// `c = None` means the whole space.
    pub fn new(n: usize, c: Option<Polyhedron>, constraints: Vec<SystemConstraint>) -> Result<Self> {
        let c = c.unwrap_or_else(|| Polyhedron::universe(n));
        check_dim(n, c.dim())?;
        for sc in &constraints {
            check_dim(n, sc.f.n())?;
        }
        if c.is_empty()? {
            return Err(Error::EmptyOperand);
        }
        Ok(ConvexSystem {
            n,
            c,
            constraints,
            derived: Arc::new(Derived::default()),
        })
    }

    /// Constraints named `f1, f2, ...`.
    pub fn with_functions(n: usize, c: Option<Polyhedron>, fs: Vec<PolyhedralFunction>) -> Result<Self> {
        let constraints = fs
            .into_iter()
            .enumerate()
            .map(|(i, f)| SystemConstraint {
                name: format!("f{}", i + 1),
                f,
            })
            .collect();
        ConvexSystem::new(n, c, constraints)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &Polyhedron {
        &self.c
    }

    pub fn constraints(&self) -> &[SystemConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn function(&self, i: usize) -> &PolyhedralFunction {
        &self.constraints[i].f
    }

    /// `B = ∩ [f_i <= 0]`.
    pub fn b_h(&self) -> Result<&HRep> {
        if let Some(b) = self.derived.b.get() {
            return Ok(b);
        }
        let mut h = HRep::new(self.n);
        for sc in &self.constraints {
            h = h.intersect(&sc.f.sublevel_h(&Rational::from_integer(0.into()))?)?;
        }
        Ok(self.derived.b.get_or_init(|| h))
    }

    /// `A = B ∩ C`.
    pub fn a_h(&self) -> Result<&HRep> {
        if let Some(a) = self.derived.a.get() {
            return Ok(a);
        }
        let h = self.b_h()?.intersect(self.c.h()?)?;
        Ok(self.derived.a.get_or_init(|| h))
    }

    pub fn b(&self) -> Result<Polyhedron> {
        Polyhedron::from_h(self.b_h()?.clone())
    }

    pub fn a(&self) -> Result<Polyhedron> {
        Polyhedron::from_h(self.a_h()?.clone())
    }

    pub fn indicator_c(&self) -> Result<&PolyhedralFunction> {
        if let Some(d) = self.derived.delta_c.get() {
            return Ok(d);
        }
        let d = PolyhedralFunction::indicator(&self.c)?;
        Ok(self.derived.delta_c.get_or_init(|| d))
    }

    /// Evaluates `x in A` directly from the constraint functions.
    pub fn is_feasible(&self, x: &[Rational]) -> Result<bool> {
        if !self.c.contains(x)? {
            return Ok(false);
        }
        let zero = Rational::from_integer(0.into());
        for sc in &self.constraints {
            if !sc.f.evaluate(x)?.at_most(&zero) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn characteristic_cone(&self) -> Result<&CharacteristicCone> {
        if let Some(k) = self.derived.cone.get() {
            return Ok(k);
        }
        let base = self.indicator_c()?.conjugate()?.epigraph().clone();
        let mut pieces = Vec::with_capacity(self.constraints.len());
        for sc in &self.constraints {
            pieces.push(sc.f.conjugate()?.epigraph().clone());
        }
        let k = CharacteristicCone {
            base,
            pieces,
            closure: OnceLock::new(),
        };
        Ok(self.derived.cone.get_or_init(|| k))
    }
}

/// `K = epi δ_C* + cone(∪ epi f_i*)`. `K` itself is only queried; its closure is materialized.
#[derive(Debug)]
pub struct CharacteristicCone {
    pub base: Polyhedron,
    pub pieces: Vec<Polyhedron>,
    closure: OnceLock<Polyhedron>,
}

impl CharacteristicCone {
    pub fn closure(&self) -> Result<&Polyhedron> {
        if let Some(c) = self.closure.get() {
            return Ok(c);
        }
        let mut acc = self.base.clone();
        for p in &self.pieces {
            acc = acc.minkowski_sum(&p.closed_conic_hull()?)?;
        }
        Ok(self.closure.get_or_init(|| acc))
    }
}

/// Answer to "is `f(x) - <x*, x> >= s` a consequence of σ?".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CertifiedConsequence(FarkasCertificate),
    /// In the closure but not in the cone: the inequality holds, no finite certificate exists.
    AsymptoticConsequence,
    NotConsequence { witness: QVec },
    /// `A ∩ dom f` is empty; the inequality holds vacuously.
    VacuousHiddenAssumptionFails(HiddenDiagnosis),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceVerdict {
    pub verdict: Verdict,
    pub x_star: QVec,
    pub s: Rational,
}

impl ConsequenceVerdict {
    pub fn is_consequence(&self) -> bool {
        !matches!(self.verdict, Verdict::NotConsequence { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self.verdict {
            Verdict::CertifiedConsequence(_) => "CertifiedConsequence",
            Verdict::AsymptoticConsequence => "AsymptoticConsequence",
            Verdict::NotConsequence { .. } => "NotConsequence",
            Verdict::VacuousHiddenAssumptionFails(_) => "VacuousHiddenAssumptionFails",
        }
    }
}
