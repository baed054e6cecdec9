//! Acceptance checks shared by the test suites and the `selftest` command.
//!
//! Every randomized check draws instance `i` from its own stream, so results do not
//! depend on thread scheduling and a failure names a reproducible instance.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{example1_objective, example1_system, kkt_example, sigma_nc};
use crate::convexfn::{support_eval, ExtendedValue, PolyhedralFunction};
use crate::error::Result;
use crate::farkas::{
    check_consequence, cone_delta_closure, consistency_dual, consistency_primal, delta_a_conjugate_epigraph,
    dual_domain_sum, epi_delta_a, epi_sum_closure, hidden_assumption, inconsistency_cone_identity,
    is_farkas_minkowski, member_closure, member_exact, recession_witness, verify_cylinder_identity, ConvexSystem,
    FmStatus, HiddenAssumption, NotFmReason, Verdict,
};
use crate::optimal::{is_optimal, kkt_find, kkt_verify, DirectSolution, PerturbedProblem};
use crate::oracle::gen::{self, SystemKind};
use crate::oracle::{oracle_consequence, sample_domain, sample_feasible, stream_rng, OracleVerdict};
use crate::ratgeom::{HRep, Polyhedron, VRep};
use crate::rational::{int, ivec, primitive, QVec, Rational};

/// Sample sizes for the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub instances: usize,
    pub oracle_samples: usize,
    pub lagrangian_samples: usize,
    /// Largest ambient dimension drawn.
    pub max_dim: usize,
}

impl Scale {
    pub fn full() -> Self {
        Scale {
            instances: 100,
            oracle_samples: 10_000,
            lagrangian_samples: 1_000,
            max_dim: 3,
        }
    }

    pub fn quick() -> Self {
        Scale {
            instances: 12,
            oracle_samples: 400,
            lagrangian_samples: 100,
            max_dim: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Number of instances examined.
    pub cases: usize,
    pub detail: String,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({} cases){}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", self.detail)
            }
        )
    }
}

/// Outcome of one instance: `Ok(())` passes, `Err` names what went wrong.
type Case = std::result::Result<(), String>;

fn ensure(cond: bool, what: impl Into<String>) -> Case {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn lift(r: Result<Case>) -> Case {
    r.unwrap_or_else(|e| Err(format!("error: {e}")))
}

fn outcome(id: u8, name: &'static str, results: Vec<Case>) -> CheckOutcome {
    let cases = results.len();
    let failure = results
        .into_iter()
        .enumerate()
        .find_map(|(i, r)| r.err().map(|e| format!("instance {i}: {e}")));
    CheckOutcome {
        id,
        name,
        passed: failure.is_none(),
        cases,
        detail: failure.unwrap_or_default(),
    }
}

fn run_cases<F>(seed: u64, salt: u64, count: usize, case: F) -> Vec<Case>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Case> + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| lift(case(&mut stream_rng(seed ^ salt, i))))
        .collect()
}

fn dim<R: Rng>(rng: &mut R, scale: &Scale) -> usize {
    rng.gen_range(1..=scale.max_dim.max(1))
}

fn set(dim: usize, ineqs: &[(&[i64], i64)]) -> Result<Polyhedron> {
    let mut h = HRep::new(dim);
    for (r, b) in ineqs {
        h.push_ineq(ivec(r), int(*b));
    }
    Polyhedron::from_h(h)
}

/// Exact golden values on the parallel-rays example.
pub fn example1_golden() -> CheckOutcome {
    let checks: Vec<(&str, Result<Case>)> = vec![
        ("solution set", (|| {
            let expected = Polyhedron::from_v(
                2,
                VRep {
                    points: vec![ivec(&[0, 1])],
                    rays: vec![ivec(&[1, 1])],
                    lineality: vec![],
                },
            )?;
            Ok(ensure(example1_system().a()?.equals(&expected)?, "A differs from {(0,1)} + cone(1,1)"))
        })()),
        ("hidden assumption", (|| {
            Ok(ensure(
                hidden_assumption(&example1_objective(), &example1_system())? == HiddenAssumption::Fails,
                "A meets dom f",
            ))
        })()),
        ("farkas-minkowski", (|| {
            Ok(ensure(is_farkas_minkowski(&example1_system())? == FmStatus::Fm, "system not FM"))
        })()),
        ("closure of K", (|| {
            let expected = set(3, &[(&[1, 1, 0], 0), (&[0, 1, -1], 0)])?;
            let sys = example1_system();
            Ok(ensure(sys.characteristic_cone()?.closure()?.equals(&expected)?, "cl K differs"))
        })()),
        ("closure membership", (|| {
            let (f, sys) = (example1_objective(), example1_system());
            for alpha in [-1, 0, 1] {
                if member_closure(&ivec(&[0, 0, -alpha]), &f, &sys)? {
                    return Ok(Err(format!("(0,0,{}) in the closure", -alpha)));
                }
            }
            Ok(Ok(()))
        })()),
        ("support values", (|| {
            let (f, sys) = (example1_objective(), example1_system());
            let q = ivec(&[1, 1, 0]);
            let epi = support_eval(f.conjugate()?.epigraph(), &q)?;
            let k = support_eval(sys.characteristic_cone()?.closure()?, &q)?;
            Ok(ensure(
                epi == ExtendedValue::Finite(int(-1)) && k == ExtendedValue::Finite(int(0)),
                format!("got {epi} and {k}"),
            ))
        })()),
        ("recession witness", (|| {
            let d = recession_witness(&example1_objective(), &example1_system(), &ivec(&[0, 0]))?;
            Ok(ensure(d == Some(ivec(&[1, 1])), format!("got {d:?}")))
        })()),
    ];
    let results = checks
        .into_iter()
        .map(|(name, r)| lift(r).map_err(|e| format!("{name}: {e}")))
        .collect();
    outcome(1, "parallel-rays example golden values", results)
}

/// `cl K` equals the conjugate epigraph of `δ_A` on consistent systems.
pub fn closure_matches_delta_a(seed: u64, scale: &Scale) -> CheckOutcome {
    let results = run_cases(seed, 0x2, scale.instances, |rng| {
        let n = dim(rng, scale);
        let m = rng.gen_range(1..=3);
        let sys = gen::random_system(rng, n, m, SystemKind::Consistent);
        Ok(ensure(
            epi_delta_a(&sys)?.equals(&delta_a_conjugate_epigraph(&sys)?)?,
            "cl K differs from epi δ_A*",
        ))
    });
    outcome(2, "closure of K equals epi of the support function of A", results)
}

/// `Σ cl cone epi f_i* = epi δ_B*` and `epi f* + cl K = epi (f + δ_A)*`.
pub fn conjugate_sum_identities(seed: u64, scale: &Scale) -> CheckOutcome {
    let results = run_cases(seed, 0x3, scale.instances, |rng| {
        let n = dim(rng, scale);
        let m = rng.gen_range(1..=3);
        let sys = gen::random_system(rng, n, m, SystemKind::Consistent);
        let b = sys.b()?;
        let lhs = cone_delta_closure(&sys)?;
        let rhs = PolyhedralFunction::indicator(&b)?.conjugate()?.epigraph().clone();
        if !lhs.equals(&rhs)? {
            return Ok(Err("sum of conic hulls differs from epi δ_B*".into()));
        }
        let anchor = consistency_primal(&sys)?.expect("consistent by construction");
        let f = gen::random_function_through(rng, n, &anchor);
        let sum = f.add_indicator(&sys.a()?)?;
        let fresh = PolyhedralFunction::from_epigraph(sum.epigraph().clone())?;
        Ok(ensure(
            epi_sum_closure(&f, &sys)?.equals(fresh.conjugate()?.epigraph())?,
            "epi f* + cl K differs from epi (f + δ_A)*",
        ))
    });
    outcome(3, "conjugate of sums identities", results)
}

fn conjugate_laws<R: Rng>(rng: &mut R, f: &PolyhedralFunction) -> Result<Case> {
    // a fresh function, so the conjugate is not served from the cache
    let g = PolyhedralFunction::from_epigraph(f.conjugate()?.epigraph().clone())?;
    if !g.conjugate()?.equals(f)? {
        return Ok(Err("f** differs from f".into()));
    }
    let conj_dom = f.conjugate()?.domain()?;
    let rec = f.recession_function()?;
    let support_dom = PolyhedralFunction::indicator(&conj_dom)?.conjugate()?.clone();
    if !rec.equals(&support_dom)? {
        return Ok(Err("recession function differs from the support function of dom f*".into()));
    }
    let rec_zero = rec.sublevel(&Rational::zero())?;
    if !conj_dom.polar()?.equals(&rec_zero)? {
        return Ok(Err("polar of dom f* differs from [f∞ <= 0]".into()));
    }
    let x0 = f.domain_point()?;
    let f0 = f.evaluate(&x0)?.finite().cloned().expect("domain point");
    let level = f0 + int(rng.gen_range(0..=3));
    if !f.sublevel(&level)?.recession_cone()?.equals(&rec_zero)? {
        return Ok(Err("recession cone of a sublevel set differs from [f∞ <= 0]".into()));
    }
    let cloud = sample_domain(f, 6, rng.gen())?;
    for x in &cloud.points {
        let fx = f.evaluate(x)?;
        if f.perspective_support(x, &-Rational::one())? != fx {
            return Ok(Err("support of epi f* at (x,-1) differs from f(x)".into()));
        }
        let two = int(2);
        let half: QVec = x.iter().map(|v| v / &two).collect();
        let expected = f.evaluate(&half)?;
        let expected = match expected {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(v * &two),
            inf => inf,
        };
        if f.perspective_support(x, &-two.clone())? != expected {
            return Ok(Err("support of epi f* at (x,-2) differs from 2 f(x/2)".into()));
        }
        if f.perspective_support(x, &Rational::zero())? != rec.evaluate(x)? {
            return Ok(Err("support of epi f* at (x,0) differs from f∞(x)".into()));
        }
        if rec.evaluate(x)? != support_eval(&conj_dom, x)? {
            return Ok(Err("f∞ differs from the support function of dom f*".into()));
        }
        if f.perspective_support(x, &Rational::one())? != ExtendedValue::PlusInfinity {
            return Ok(Err("support of epi f* at (x,1) is finite".into()));
        }
    }
    Ok(Ok(()))
}

/// Biconjugation and the perspective, recession and sublevel identities.
pub fn conjugate_invariants(seed: u64, scale: &Scale) -> CheckOutcome {
    let results = run_cases(seed, 0x4, scale.instances, |rng| {
        let n = dim(rng, scale);
        let f = gen::random_function(rng, n);
        conjugate_laws(rng, &f)
    });
    outcome(4, "biconjugation and conjugate identities", results)
}

/// Forward-built certificates are recovered, re-verify, and no sample refutes them.
pub fn certificate_round_trip(seed: u64, scale: &Scale) -> CheckOutcome {
    let results = run_cases(seed, 0x5, scale.instances, |rng| {
        let n = dim(rng, scale);
        let m = rng.gen_range(1..=3);
        let inst = gen::forward_instance(rng, n, m)?;
        let out = check_consequence(&inst.f, &inst.x_star, &inst.s, &inst.sigma)?;
        let cert = match &out.verdict {
            Verdict::CertifiedConsequence(c) => c,
            _ => return Ok(Err(format!("verdict {}", out.kind()))),
        };
        if !cert.verify(&inst.f, &inst.sigma)? {
            return Ok(Err("certificate does not re-verify".into()));
        }
        let cloud = sample_feasible(&inst.sigma, scale.oracle_samples, rng.gen())?;
        if let OracleVerdict::Violation(x) = oracle_consequence(&inst.f, &inst.x_star, &inst.s, &inst.sigma, &cloud)? {
            return Ok(Err(format!("oracle violation at {x:?}")));
        }
        // the Lagrangian bound holds on all of C, not just on the solutions
        let c_cloud = sample_domain(inst.sigma.indicator_c()?, scale.lagrangian_samples, rng.gen())?;
        for x in &c_cloud.points {
            let below = match cert.lagrangian(&inst.f, &inst.sigma, x)? {
                ExtendedValue::Finite(v) => v < inst.s,
                ExtendedValue::PlusInfinity => false,
            };
            if below {
                return Ok(Err(format!("Lagrangian below s at {x:?}")));
            }
        }
        Ok(Ok(()))
    });
    outcome(5, "forward certificates round-trip", results)
}

/// The non-closed characteristic cone is detected and yields an asymptotic consequence.
pub fn open_cone_detection() -> CheckOutcome {
    let r: Result<Case> = (|| {
        let sys = sigma_nc();
        match is_farkas_minkowski(&sys)? {
            FmStatus::NotFm(NotFmReason::OpenCone { offending_ray }) => {
                let p = primitive(&offending_ray);
                if p != ivec(&[0, 1, 0]) && p != ivec(&[0, -1, 0]) {
                    return Ok(Err(format!("offending ray {p:?}")));
                }
            }
            other => return Ok(Err(format!("status {other:?}"))),
        }
        let f = PolyhedralFunction::zero(2);
        let q = ivec(&[0, 1, 0]);
        if !member_closure(&q, &f, &sys)? || member_exact(&q, &f, &sys)?.is_some() {
            return Ok(Err("closure and exact membership agree at (0,1,0)".into()));
        }
        let out = check_consequence(&f, &ivec(&[0, 1]), &Rational::zero(), &sys)?;
        Ok(ensure(
            out.verdict == Verdict::AsymptoticConsequence,
            format!("verdict {}", out.kind()),
        ))
    })();
    outcome(6, "open characteristic cone detection", vec![lift(r)])
}

/// A pair from one of the families used for the hidden-assumption checks.
fn hidden_family<R: Rng>(rng: &mut R, scale: &Scale) -> Result<(PolyhedralFunction, ConvexSystem)> {
    let n = dim(rng, scale);
    Ok(match rng.gen_range(0..5) {
        0 | 1 => {
            let m = rng.gen_range(1..=3);
            (gen::random_function(rng, n), gen::random_system(rng, n, m, SystemKind::Consistent))
        }
        2 => {
            let (sys, f) = gen::parallel_rays(rng, n.max(2));
            (f, sys)
        }
        3 => {
            let x0 = gen::int_vec(rng, n, -2, 2);
            let c = gen::cube(n, 2);
            let shifted = c.h()?.clone();
            let f1 = gen::random_constraint_at(rng, &x0);
            let sys = ConvexSystem::with_functions(n, Some(Polyhedron::from_h(shifted)?), vec![f1])?;
            (gen::far_objective(rng, n), sys)
        }
        _ => {
            let m = rng.gen_range(0..=2);
            (gen::random_function(rng, n), gen::random_system(rng, n, m, SystemKind::Inconsistent))
        }
    })
}

/// The cylinder identity holds exactly when the hidden assumption fails; witnesses match dual membership.
pub fn hidden_assumption_characterization(seed: u64, scale: &Scale) -> CheckOutcome {
    let results = run_cases(seed, 0x7, scale.instances, |rng| {
        let (f, sys) = hidden_family(rng, scale)?;
        let fails = hidden_assumption(&f, &sys)? == HiddenAssumption::Fails;
        if verify_cylinder_identity(&f, &sys)? != fails {
            return Ok(Err(format!("cylinder identity disagrees with hidden assumption (fails = {fails})")));
        }
        if fails {
            let dual = dual_domain_sum(&f, &sys)?;
            for _ in 0..4 {
                let x_star = gen::int_vec(rng, sys.n(), -3, 3);
                let witness = recession_witness(&f, &sys, &x_star)?;
                if witness.is_some() == dual.contains(&x_star)? {
                    return Ok(Err(format!("witness {witness:?} disagrees with dual membership at {x_star:?}")));
                }
            }
        }
        Ok(Ok(()))
    });
    outcome(7, "hidden assumption characterization", results)
}

fn optimality_case<R: Rng>(rng: &mut R, scale: &Scale) -> Result<Option<Case>> {
    let n = dim(rng, scale);
    let m = rng.gen_range(1..=3);
    let (sys, f, x_star) = gen::perturbed_instance(rng, n, m);
    let p = PerturbedProblem::new(sys, f, x_star)?;
    let (x_opt, value) = match p.solve_direct()? {
        DirectSolution::Optimal { x, value } => (x, value),
        _ => return Ok(None),
    };
    let mut points = vec![x_opt];
    let cloud = sample_feasible(&p.sigma, 6, rng.gen())?;
    points.extend(cloud.points.into_iter().filter(|x| p.f.evaluate(x).map(|v| v.is_finite()).unwrap_or(false)));
    for x in &points {
        let obj = p.objective_at(x)?.finite().cloned().expect("inside the domain");
        let optimal = obj == value;
        if is_optimal(&p, x)? != optimal {
            return Ok(Some(Err(format!("is_optimal disagrees with the direct solution at {x:?}"))));
        }
        let out = kkt_find(&p, x)?;
        match &out.certificate {
            Some(c) => {
                if !kkt_verify(&p, x, c) {
                    return Ok(Some(Err("KKT certificate does not re-verify".into())));
                }
                if !optimal {
                    return Ok(Some(Err(format!("KKT certificate at a non-optimal point {x:?}"))));
                }
            }
            None if optimal && !out.hypothesis_unverified() => {
                return Ok(Some(Err(format!("no KKT certificate at optimal {x:?} with closed sum"))));
            }
            None => {}
        }
    }
    Ok(Some(Ok(())))
}

/// Optimality tests agree with direct solution; KKT certificates round-trip.
pub fn optimality_cross_validation(seed: u64, scale: &Scale) -> CheckOutcome {
    let hand: Case = lift((|| {
        let (sys, f) = kkt_example();
        let p = PerturbedProblem::new(sys, f, ivec(&[0, 0]))?;
        let out = kkt_find(&p, &ivec(&[1, 0]))?;
        Ok(ensure(
            out.certificate.as_ref().is_some_and(|c| c.lambda == vec![int(1)]),
            "hand instance multiplier is not 1",
        ))
    })());
    // draw until enough instances have an attained minimum
    let mut results = vec![hand];
    let mut batch = 0u64;
    while results.len() <= scale.instances && batch < 20 {
        let found: Vec<Case> = (0..scale.instances as u64)
            .into_par_iter()
            .filter_map(|i| {
                let mut rng = stream_rng(seed ^ 0x8, batch * 1_000_000 + i);
                match optimality_case(&mut rng, scale) {
                    Ok(c) => c,
                    Err(e) => Some(Err(format!("error: {e}"))),
                }
            })
            .collect();
        results.extend(found);
        batch += 1;
    }
    results.truncate(scale.instances + 1);
    let short = results.len() <= scale.instances;
    let mut out = outcome(8, "optimality and KKT cross-validation", results);
    if short && out.passed {
        out.passed = false;
        out.detail = "too few solvable instances".into();
    }
    out
}

/// Primal and dual consistency routes agree, and the cylinder cone identity tracks inconsistency.
pub fn consistency_routes(seed: u64, scale: &Scale) -> CheckOutcome {
    let inconsistent_share = scale.instances.div_ceil(4).max(1);
    let results = run_cases(seed, 0x9, scale.instances, |rng| {
        let n = dim(rng, scale);
        let m = rng.gen_range(0..=3);
        let kind = if rng.gen_range(0..scale.instances) < inconsistent_share {
            SystemKind::Inconsistent
        } else {
            SystemKind::Consistent
        };
        let sys = gen::random_system(rng, n, m, kind);
        let primal = consistency_primal(&sys)?;
        let dual = consistency_dual(&sys)?;
        if primal.is_some() == dual.is_some() {
            return Ok(Err("primal and dual routes disagree".into()));
        }
        if (kind == SystemKind::Inconsistent) != primal.is_none() {
            return Ok(Err(format!("generator asked for {kind:?}")));
        }
        if let Some(d) = &dual {
            let mut q = vec![Rational::zero(); n];
            q.push(-Rational::one());
            if !d.verify(&q, None, &sys)? {
                return Ok(Err("dual certificate does not re-verify".into()));
            }
        }
        Ok(ensure(
            inconsistency_cone_identity(&sys)? == primal.is_none(),
            "cone identity disagrees with inconsistency",
        ))
    });
    outcome(9, "consistency routes agree", results)
}

/// Runs every check that needs no external process.
pub fn run_all(seed: u64, scale: &Scale) -> Vec<CheckOutcome> {
    vec![
        example1_golden(),
        closure_matches_delta_a(seed, scale),
        conjugate_sum_identities(seed, scale),
        conjugate_invariants(seed, scale),
        certificate_round_trip(seed, scale),
        open_cone_detection(),
        hidden_assumption_characterization(seed, scale),
        optimality_cross_validation(seed, scale),
        consistency_routes(seed, scale),
    ]
}
