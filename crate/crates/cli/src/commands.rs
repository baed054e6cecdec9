use std::fmt;

use farkas_core::convexfn::ExtendedValue;
use farkas_core::farkas::{
    check_consequence, is_consistent, is_farkas_minkowski, hidden_assumption, recession_witness, sum_closedness,
    verify_cylinder_identity, Consistency, FmStatus, HiddenAssumption, Verdict,
};
use farkas_core::optimal::{is_optimal, kkt_find, kkt_verify, DirectSolution, PerturbedProblem};
use farkas_core::oracle::{oracle_consequence, sample_feasible, OracleVerdict};
use serde_json::{json, Value};

use crate::problem::{InputError, Problem};
use crate::report::{self, q, qv, text_vec};

/// Samples drawn by the oracle cross-check attached to `check`.
pub const ORACLE_SAMPLES: usize = 1_000;

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Core(farkas_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(farkas_core::Error::ResourceLimit { .. }) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<farkas_core::Error> for CliError {
    fn from(e: farkas_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// A result in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: Vec<String>,
}

type Run = Result<Outcome, CliError>;

fn names(p: &Problem) -> Vec<String> {
    p.sigma.constraints().iter().map(|c| c.name.clone()).collect()
}

fn verdict_json(v: &Verdict) -> Value {
    let mut o = match v {
        Verdict::CertifiedConsequence(c) => json!({ "certificate": report::certificate(c) }),
        Verdict::AsymptoticConsequence => json!({ "note": "in the closure only; no finite certificate exists" }),
        Verdict::NotConsequence { witness } => json!({ "witness": qv(witness) }),
        Verdict::VacuousHiddenAssumptionFails(d) => json!({ "diagnosis": report::hidden_diagnosis(d) }),
    };
    o["verdict"] = Value::String(kind(v).into());
    o
}

fn kind(v: &Verdict) -> &'static str {
    match v {
        Verdict::CertifiedConsequence(_) => "CertifiedConsequence",
        Verdict::AsymptoticConsequence => "AsymptoticConsequence",
        Verdict::NotConsequence { .. } => "NotConsequence",
        Verdict::VacuousHiddenAssumptionFails(_) => "VacuousHiddenAssumptionFails",
    }
}

fn verdict_text(v: &Verdict, out: &mut Vec<String>) {
    out.push(format!("verdict: {}", kind(v)));
    match v {
        Verdict::CertifiedConsequence(c) => {
            out.push(format!("  u* = {}  f*(u*) = {}", text_vec(&c.u_star), c.f_conj));
            out.push(format!("  v* = {}  support of C at v* = {}", text_vec(&c.v_star), c.c_support));
            if c.multipliers.is_empty() {
                out.push("  no constraint multipliers".into());
            }
            for m in &c.multipliers {
                out.push(format!(
                    "  {}: lambda = {}  u = {}  conjugate value = {}",
                    m.name,
                    m.lambda,
                    text_vec(&m.u),
                    m.conj_value
                ));
            }
        }
        Verdict::AsymptoticConsequence => {
            out.push("  the inequality holds, but only a limit of multipliers certifies it".into());
        }
        Verdict::NotConsequence { witness } => {
            out.push(format!("  violated at x = {}", text_vec(witness)));
        }
        Verdict::VacuousHiddenAssumptionFails(d) => {
            out.push("  no solution of the system lies in dom f; the inequality holds vacuously".into());
            out.push(format!("  system consistent: {}", d.system_consistent));
            match &d.recession_witness {
                Some(w) => out.push(format!("  recession witness d = {}", text_vec(w))),
                None => out.push("  no recession witness for this x*".into()),
            }
        }
    }
}

pub fn check(p: &Problem, seed: u64) -> Run {
    let f = p.objective()?;
    let (x_star, s) = (p.x_star()?, p.s()?);
    let out = check_consequence(f, x_star, s, &p.sigma)?;
    let mut json = verdict_json(&out.verdict);
    let mut text = vec![format!("query: f(x) - <{}, x> >= {}", text_vec(x_star), s)];
    verdict_text(&out.verdict, &mut text);

    // sampled cross-check on the solution set, when there is one
    let oracle = if matches!(hidden_assumption(f, &p.sigma)?, HiddenAssumption::Holds(_)) {
        let cloud = sample_feasible(&p.sigma, ORACLE_SAMPLES, seed)?;
        let found = oracle_consequence(f, x_star, s, &p.sigma, &cloud)?;
        let violation = match &found {
            OracleVerdict::Violation(x) => Some(x.clone()),
            OracleVerdict::NoViolationFound => None,
        };
        text.push(match &violation {
            Some(x) => format!("oracle: violation among {ORACLE_SAMPLES} samples at {}", text_vec(x)),
            None => format!("oracle: no violation among {ORACLE_SAMPLES} samples"),
        });
        json!({
            "samples": ORACLE_SAMPLES,
            "contradicts_verdict": out.is_consequence() && violation.is_some(),
            "violation": violation.map(|x| qv(&x)),
        })
    } else {
        Value::Null
    };
    json["x_star"] = qv(x_star);
    json["s"] = q(s);
    json["oracle"] = oracle;
    Ok(Outcome { json, text })
}

pub fn certify(p: &Problem) -> Run {
    let f = p.objective()?;
    let (x_star, s) = (p.x_star()?, p.s()?);
    let out = check_consequence(f, x_star, s, &p.sigma)?;
    let mut text = Vec::new();
    let json = match &out.verdict {
        Verdict::CertifiedConsequence(c) => {
            verdict_text(&out.verdict, &mut text);
            json!({ "verdict": kind(&out.verdict), "certificate": report::certificate(c) })
        }
        other => {
            text.push(format!("no finite certificate: {}", kind(other)));
            json!({ "verdict": kind(other), "certificate": Value::Null })
        }
    };
    Ok(Outcome { json, text })
}

/// Re-checks a certificate read back from a report against the problem, exactly.
pub fn verify_certificate(p: &Problem, report_bytes: &[u8]) -> Run {
    let f = p.objective()?;
    let root: Value = serde_json::from_slice(report_bytes).map_err(|e| InputError {
        path: String::new(),
        message: format!("invalid report JSON: {e}"),
    })?;
    let cert_value = root
        .pointer("/result/certificate")
        .filter(|v| !v.is_null())
        .ok_or(InputError {
            path: "result.certificate".into(),
            message: "report carries no certificate".into(),
        })?;
    let cert = report::read_certificate(cert_value, p.sigma.n(), "result.certificate")?;
    let matches_query =
        p.query.x_star.as_ref().is_none_or(|x| *x == cert.x_star) && p.query.s.as_ref().is_none_or(|s| *s == cert.s);
    let verified = matches_query && cert.verify(f, &p.sigma)?;
    let text = vec![if verified {
        "certificate verified exactly".to_string()
    } else if !matches_query {
        "certificate rejected: it is for a different query".to_string()
    } else {
        "certificate rejected".to_string()
    }];
    Ok(Outcome {
        json: json!({ "verified": verified, "matches_query": matches_query }),
        text,
    })
}

pub fn consistency(p: &Problem) -> Run {
    Ok(match is_consistent(&p.sigma)? {
        Consistency::Consistent(x) => Outcome {
            text: vec![format!("consistent: x = {} solves the system", text_vec(&x))],
            json: json!({ "consistent": true, "solution": qv(&x) }),
        },
        Consistency::Inconsistent(d) => {
            let mut text = vec!["inconsistent: (0, -1) lies in the closure of the characteristic cone".to_string()];
            let names = names(p);
            for t in &d.terms {
                text.push(format!("  {}: lambda = {}  w = {}", names[t.index], t.lambda, text_vec(&t.w)));
            }
            text.push(format!("  base part = {}", text_vec(&d.base_part)));
            Outcome {
                json: json!({ "consistent": false, "dual_certificate": report::decomposition(&d, &names) }),
                text,
            }
        }
    })
}

pub fn fm(p: &Problem) -> Run {
    let status = is_farkas_minkowski(&p.sigma)?;
    let mut json = report::fm_status(&status);
    let mut text = vec![match &status {
        FmStatus::Fm => "FM = true: the system is consistent and its characteristic cone is closed".to_string(),
        FmStatus::NotFm(r) => format!("FM = false: {}", report::fm_status(&FmStatus::NotFm(r.clone()))["reason"].as_str().unwrap_or("")),
    }];
    if let Some(ray) = json.get("offending_ray").cloned() {
        text.push(format!("  offending ray of the closure: {}", ray_text(&ray)));
    }
    let closure = p.sigma.characteristic_cone()?.closure()?;
    json["closure_of_k"] = report::polyhedron(closure)?;
    Ok(Outcome { json, text })
}

fn ray_text(v: &Value) -> String {
    let parts: Vec<&str> = v.as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default();
    format!("({})", parts.join(", "))
}

pub fn hidden(p: &Problem) -> Run {
    let f = p.objective()?;
    let status = hidden_assumption(f, &p.sigma)?;
    let cylinder = verify_cylinder_identity(f, &p.sigma)?;
    Ok(match status {
        HiddenAssumption::Holds(x) => Outcome {
            text: vec![
                format!("hidden assumption holds: x = {} solves the system with f(x) finite", text_vec(&x)),
                format!("  closure of epi f* + K is a vertical cylinder: {cylinder}"),
            ],
            json: json!({ "holds": true, "point": qv(&x), "cylinder_identity": cylinder }),
        },
        HiddenAssumption::Fails => {
            let witness = match &p.query.x_star {
                Some(x) => recession_witness(f, &p.sigma, x)?,
                None => None,
            };
            let mut text = vec![
                "hidden assumption fails: no solution of the system lies in dom f".to_string(),
                format!("  closure of epi f* + K is a vertical cylinder: {cylinder}"),
            ];
            if let Some(w) = &witness {
                text.push(format!("  recession witness d = {}", text_vec(w)));
            }
            Outcome {
                json: json!({
                    "holds": false,
                    "cylinder_identity": cylinder,
                    "recession_witness": witness.map(|w| qv(&w)),
                }),
                text,
            }
        }
    })
}

/// The whole pipeline with a narrative: consistency, hidden assumption, FM,
/// cylinder identity, recession witness, then the consequence query.
pub fn diagnose(p: &Problem) -> Run {
    let f = p.objective()?;
    let mut text = Vec::new();
    let mut json = json!({});

    let consistent = match is_consistent(&p.sigma)? {
        Consistency::Consistent(x) => {
            text.push(format!("1. The system is consistent; x = {} is a solution.", text_vec(&x)));
            json["consistency"] = json!({ "consistent": true, "solution": qv(&x) });
            true
        }
        Consistency::Inconsistent(d) => {
            text.push("1. The system is inconsistent: (0, -1) lies in the closure of K.".into());
            json["consistency"] = json!({ "consistent": false, "dual_certificate": report::decomposition(&d, &names(p)) });
            false
        }
    };

    let hidden = hidden_assumption(f, &p.sigma)?;
    match &hidden {
        HiddenAssumption::Holds(x) => {
            text.push(format!("2. Hidden assumption holds: x = {} solves the system and f(x) is finite.", text_vec(x)));
            json["hidden_assumption"] = json!({ "holds": true, "point": qv(x) });
        }
        HiddenAssumption::Fails => {
            text.push("2. Hidden assumption fails: A ∩ dom f = ∅.".into());
            text.push("   WARNING: stable reverse Farkas equivalence not applicable: A ∩ dom f = ∅".into());
            json["hidden_assumption"] = json!({ "holds": false });
        }
    }

    let fm = is_farkas_minkowski(&p.sigma)?;
    text.push(match &fm {
        FmStatus::Fm => "3. The system is Farkas-Minkowski: K is closed, so asymptotic certificates become finite.".into(),
        FmStatus::NotFm(_) if !consistent => "3. Not Farkas-Minkowski: the solution set is empty.".into(),
        FmStatus::NotFm(_) => "3. Not Farkas-Minkowski: K is not closed; some consequences have no finite certificate.".into(),
    });
    json["fm"] = report::fm_status(&fm);

    let cylinder = verify_cylinder_identity(f, &p.sigma)?;
    let expected = hidden == HiddenAssumption::Fails;
    text.push(format!(
        "4. cl(epi f* + K) {} the cylinder (dom f* + cl cone Ω + barr C) × Q{}.",
        if cylinder { "equals" } else { "differs from" },
        if cylinder == expected { ", as the hidden assumption predicts" } else { " (UNEXPECTED)" }
    ));
    json["cylinder_identity"] = json!({ "holds": cylinder, "agrees_with_hidden_assumption": cylinder == expected });

    let closedness = sum_closedness(f, &p.sigma)?;
    json["sum_closedness"] = Value::String(report::closedness(closedness).into());

    match (&hidden, &p.query.x_star) {
        (HiddenAssumption::Fails, Some(x)) => {
            let w = recession_witness(f, &p.sigma, x)?;
            text.push(match &w {
                Some(d) => format!("5. Recession witness at x* = {}: d = {} with f∞(d) < <x*, d>.", text_vec(x), text_vec(d)),
                None => format!("5. No recession witness at x* = {}; x* lies in the dual domain sum.", text_vec(x)),
            });
            json["recession_witness"] = w.map_or(Value::Null, |d| qv(&d));
        }
        (HiddenAssumption::Fails, None) => text.push("5. No x* given; recession witness skipped.".into()),
        (HiddenAssumption::Holds(_), _) => text.push("5. Recession witness not applicable (hidden assumption holds).".into()),
    }

    match (&p.query.x_star, &p.query.s) {
        (Some(x), Some(s)) => {
            let out = check_consequence(f, x, s, &p.sigma)?;
            text.push(format!("6. Query f(x) - <{}, x> >= {}:", text_vec(x), s));
            let mut lines = Vec::new();
            verdict_text(&out.verdict, &mut lines);
            text.extend(lines.into_iter().map(|l| format!("   {l}")));
            json["consequence"] = verdict_json(&out.verdict);
        }
        _ => text.push("6. No query (x*, s) given; consequence check skipped.".into()),
    }
    Ok(Outcome { json, text })
}

fn perturbed(p: &Problem) -> Result<PerturbedProblem, CliError> {
    Ok(PerturbedProblem::new(p.sigma.clone(), p.objective()?.clone(), p.x_star()?.clone())?)
}

pub fn optimal(p: &Problem) -> Run {
    let pp = perturbed(p)?;
    let x_bar = p.x_bar()?;
    let optimal = is_optimal(&pp, x_bar)?;
    let value = match pp.objective_at(x_bar)? {
        ExtendedValue::Finite(v) => v,
        ExtendedValue::PlusInfinity => unreachable!("is_optimal checked the domain"),
    };
    let (direct_json, direct_text) = match pp.solve_direct()? {
        DirectSolution::Optimal { x, value } => (
            json!({ "status": "optimal", "x": qv(&x), "value": q(&value) }),
            format!("direct solution: minimum {value} at {}", text_vec(&x)),
        ),
        DirectSolution::Unbounded => (json!({ "status": "unbounded" }), "direct solution: unbounded below".into()),
        DirectSolution::Infeasible => (json!({ "status": "infeasible" }), "direct solution: infeasible".into()),
    };
    Ok(Outcome {
        text: vec![
            format!("x̄ = {} is {}optimal (objective {value})", text_vec(x_bar), if optimal { "" } else { "not " }),
            direct_text,
        ],
        json: json!({ "optimal": optimal, "objective": q(&value), "direct": direct_json }),
    })
}

pub fn kkt(p: &Problem) -> Run {
    let pp = perturbed(p)?;
    let x_bar = p.x_bar()?;
    let out = kkt_find(&pp, x_bar)?;
    let closed = report::closedness(out.closedness);
    let mut text = Vec::new();
    let cert_json = match &out.certificate {
        Some(c) => {
            let verified = kkt_verify(&pp, x_bar, c);
            text.push(format!("KKT multipliers found at x̄ = {} (re-verified: {verified})", text_vec(x_bar)));
            text.push(format!("  u* = {}  v* = {}", text_vec(&c.u_star), text_vec(&c.v_star)));
            for ((j, lam), u) in c.j.iter().zip(&c.lambda).zip(&c.u_j) {
                text.push(format!("  {}: lambda = {lam}  u = {}", names(p)[*j], text_vec(u)));
            }
            let mut v = report::kkt(c, &names(p));
            v["verified"] = Value::Bool(verified);
            v
        }
        None => {
            text.push(format!("no KKT multipliers at x̄ = {}", text_vec(x_bar)));
            if out.hypothesis_unverified() {
                text.push("  WARNING: closedness of epi f* + K unverified; x̄ may still be optimal".into());
            } else {
                text.push("  closedness verified, so x̄ is not optimal".into());
            }
            Value::Null
        }
    };
    text.push(format!("closedness of epi f* + K: {closed}"));
    Ok(Outcome {
        json: json!({
            "certificate": cert_json,
            "closedness": closed,
            "hypothesis_unverified": out.hypothesis_unverified(),
        }),
        text,
    })
}
