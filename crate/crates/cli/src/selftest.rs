//! Golden values for the parallel-rays example, then every randomized check at small scale.

use farkas_core::catalog::{example1_objective, example1_system, kkt_example};
use farkas_core::convexfn::{support_eval, ExtendedValue};
use farkas_core::farkas::{hidden_assumption, is_farkas_minkowski, member_closure, recession_witness, FmStatus, HiddenAssumption};
use farkas_core::optimal::{kkt_find, PerturbedProblem};
use farkas_core::ratgeom::{HRep, Polyhedron, VRep};
use farkas_core::rational::ivec;
use farkas_core::suite::{self, Scale};
use serde_json::{json, Value};

use crate::commands::{CliError, Outcome};
use crate::problem::{rational, vector, InputError};

pub const DEFAULT_GOLDEN: &str = include_str!("../golden/example1.json");

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn input(path: &str, message: &str) -> CliError {
    CliError::Input(InputError {
        path: path.into(),
        message: message.into(),
    })
}

fn key<'a>(g: &'a Value, k: &str) -> Result<&'a Value, CliError> {
    g.get(k).ok_or_else(|| input(k, "missing from the golden file"))
}

fn vecs(v: &Value, n: usize, path: &str) -> Result<Vec<Vec<farkas_core::Rational>>, CliError> {
    let items = v.as_array().ok_or_else(|| input(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| vector(x, n, &format!("{path}[{i}]")).map_err(CliError::from))
        .collect()
}

fn golden_checks(g: &Value) -> Result<Vec<Check>, CliError> {
    let (f, sys) = (example1_objective(), example1_system());
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.into(),
            passed,
            detail,
        })
    };

    let s = key(g, "solution_set")?;
    let expected = Polyhedron::from_v(
        2,
        VRep {
            points: vecs(key(s, "points")?, 2, "solution_set.points")?,
            rays: vecs(key(s, "rays")?, 2, "solution_set.rays")?,
            lineality: vecs(key(s, "lineality")?, 2, "solution_set.lineality")?,
        },
    )?;
    let a = sys.a()?;
    push("solution_set", a.equals(&expected)?, format!("computed {a}"));

    let fails = key(g, "hidden_assumption_fails")?.as_bool().ok_or_else(|| input("hidden_assumption_fails", "expected a boolean"))?;
    let got = hidden_assumption(&f, &sys)? == HiddenAssumption::Fails;
    push("hidden_assumption_fails", got == fails, format!("computed {got}"));

    let fm = key(g, "farkas_minkowski")?.as_bool().ok_or_else(|| input("farkas_minkowski", "expected a boolean"))?;
    let got = is_farkas_minkowski(&sys)? == FmStatus::Fm;
    push("farkas_minkowski", got == fm, format!("computed {got}"));

    let rows = key(key(g, "closure_of_k")?, "inequalities")?
        .as_array()
        .ok_or_else(|| input("closure_of_k.inequalities", "expected an array"))?;
    let mut h = HRep::new(3);
    for (i, r) in rows.iter().enumerate() {
        let p = format!("closure_of_k.inequalities[{i}]");
        h.push_ineq(
            vector(key(r, "a")?, 3, &format!("{p}.a"))?,
            rational(key(r, "b")?, &format!("{p}.b"))?,
        );
    }
    let closure = sys.characteristic_cone()?.closure()?;
    push("closure_of_k", closure.equals(&Polyhedron::from_h(h)?)?, format!("computed {closure}"));

    let outside = vecs(key(g, "outside_closure")?, 3, "outside_closure")?;
    let mut inside = Vec::new();
    for q in &outside {
        if member_closure(q, &f, &sys)? {
            inside.push(crate::report::text_vec(q));
        }
    }
    let detail = if inside.is_empty() {
        "none in the closure".to_string()
    } else {
        format!("in the closure: {}", inside.join(" "))
    };
    push("outside_closure", inside.is_empty(), detail);

    for (name, set) in [
        ("support_of_epi_conjugate", f.conjugate()?.epigraph()),
        ("support_of_k", closure),
    ] {
        let e = key(g, name)?;
        let at = vector(key(e, "at")?, 3, &format!("{name}.at"))?;
        let value = rational(key(e, "value")?, &format!("{name}.value"))?;
        let got = support_eval(set, &at)?;
        push(name, got == ExtendedValue::Finite(value), format!("computed {got}"));
    }

    let w = key(g, "recession_witness")?;
    let x_star = vector(key(w, "x_star")?, 2, "recession_witness.x_star")?;
    let dir = vector(key(w, "direction")?, 2, "recession_witness.direction")?;
    let got = recession_witness(&f, &sys, &x_star)?;
    push(
        "recession_witness",
        got.as_ref() == Some(&dir),
        format!("computed {:?}", got.map(|d| crate::report::text_vec(&d))),
    );

    let lam = rational(key(g, "kkt_multiplier")?, "kkt_multiplier")?;
    let (ksys, kf) = kkt_example();
    let p = PerturbedProblem::new(ksys, kf, ivec(&[0, 0]))?;
    let cert = kkt_find(&p, &ivec(&[1, 0]))?.certificate;
    let got = cert.map(|c| c.lambda);
    push(
        "kkt_multiplier",
        got.as_ref() == Some(&vec![lam]),
        format!("computed {:?}", got.map(|l| l.iter().map(ToString::to_string).collect::<Vec<_>>())),
    );
    Ok(checks)
}

/// Runs all checks; the second value names the first failing check.
pub fn run(golden: &[u8], seed: u64) -> Result<(Outcome, Option<String>), CliError> {
    let g: Value = serde_json::from_slice(golden).map_err(|e| input("", &format!("invalid golden file: {e}")))?;
    let mut checks = golden_checks(&g)?;
    for out in suite::run_all(seed, &Scale::quick()) {
        checks.push(Check {
            name: format!("criterion {}: {}", out.id, out.name),
            passed: out.passed,
            detail: if out.passed {
                format!("{} cases", out.cases)
            } else {
                out.detail
            },
        });
    }
    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    let json = json!({
        "passed": first_failure.is_none(),
        "checks": checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    let text = checks
        .iter()
        .map(|c| {
            let status = if c.passed { "ok  " } else { "FAIL" };
            if c.passed {
                format!("{status} {}", c.name)
            } else {
                format!("{status} {} ({})", c.name, c.detail)
            }
        })
        .collect();
    Ok((Outcome { json, text }, first_failure))
}
