//! Canonical JSON encoding of results. Keys are sorted and rationals are strings,
//! so identical inputs give byte-identical reports.

use farkas_core::farkas::{
    Closedness, ConeTerm, Decomposition, FarkasCertificate, FmStatus, HiddenDiagnosis, Multiplier, NotFmReason,
};
use farkas_core::optimal::KktCertificate;
use farkas_core::ratgeom::{HRep, Polyhedron, VRep};
use farkas_core::{QVec, Rational};
use serde_json::{json, Value};

use crate::problem::{rational, vector, InputError};

pub const TOOL: &str = "farkas";

pub fn q(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn qv(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn qvs(vs: &[QVec]) -> Value {
    Value::Array(vs.iter().map(|v| qv(v)).collect())
}

/// `(1/2, -3)`
pub fn text_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn vrep(v: &VRep) -> Value {
    json!({ "points": qvs(&v.points), "rays": qvs(&v.rays), "lineality": qvs(&v.lineality) })
}

pub fn hrep(h: &HRep) -> Value {
    let rows = |cs: &[farkas_core::ratgeom::Constraint]| -> Value {
        cs.iter().map(|c| json!({ "a": qv(&c.row), "b": q(&c.rhs) })).collect()
    };
    json!({ "inequalities": rows(&h.inequalities), "equalities": rows(&h.equalities) })
}

pub fn polyhedron(p: &Polyhedron) -> farkas_core::Result<Value> {
    let m = p.minimized()?;
    Ok(json!({ "h": hrep(m.h()?), "v": vrep(m.v()?) }))
}

pub fn decomposition(d: &Decomposition, names: &[String]) -> Value {
    let terms: Vec<Value> = d
        .terms
        .iter()
        .map(|t: &ConeTerm| {
            json!({
                "index": t.index,
                "name": names.get(t.index).cloned().unwrap_or_default(),
                "lambda": q(&t.lambda),
                "w": qv(&t.w),
            })
        })
        .collect();
    json!({
        "objective_part": d.objective_part.as_ref().map(|p| qv(p)),
        "base_part": qv(&d.base_part),
        "terms": terms,
        "exact": d.is_exact(),
    })
}

pub fn certificate(c: &FarkasCertificate) -> Value {
    let ms: Vec<Value> = c
        .multipliers
        .iter()
        .map(|m| {
            json!({
                "index": m.index,
                "name": m.name,
                "lambda": q(&m.lambda),
                "u": qv(&m.u),
                "conj_value": q(&m.conj_value),
            })
        })
        .collect();
    json!({
        "x_star": qv(&c.x_star),
        "s": q(&c.s),
        "u_star": qv(&c.u_star),
        "f_conj": q(&c.f_conj),
        "v_star": qv(&c.v_star),
        "c_support": q(&c.c_support),
        "multipliers": ms,
    })
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, InputError> {
    v.get(key).ok_or(InputError {
        path: format!("{path}.{key}"),
        message: "missing".into(),
    })
}

/// Reads back a certificate written by [`certificate`]; `path` locates it in the file.
pub fn read_certificate(v: &Value, n: usize, path: &str) -> Result<FarkasCertificate, InputError> {
    let vecf = |key: &str| vector(get(v, key, path)?, n, &format!("{path}.{key}"));
    let ratf = |key: &str| rational(get(v, key, path)?, &format!("{path}.{key}"));
    let ms_path = format!("{path}.multipliers");
    let raw = get(v, "multipliers", path)?.as_array().ok_or(InputError {
        path: ms_path.clone(),
        message: "expected an array".into(),
    })?;
    let mut multipliers = Vec::with_capacity(raw.len());
    for (i, m) in raw.iter().enumerate() {
        let p = format!("{ms_path}[{i}]");
        let index = get(m, "index", &p)?.as_u64().ok_or(InputError {
            path: format!("{p}.index"),
            message: "expected a non-negative integer".into(),
        })? as usize;
        multipliers.push(Multiplier {
            index,
            name: get(m, "name", &p)?.as_str().unwrap_or_default().to_string(),
            lambda: rational(get(m, "lambda", &p)?, &format!("{p}.lambda"))?,
            u: vector(get(m, "u", &p)?, n, &format!("{p}.u"))?,
            conj_value: rational(get(m, "conj_value", &p)?, &format!("{p}.conj_value"))?,
        });
    }
    Ok(FarkasCertificate {
        x_star: vecf("x_star")?,
        s: ratf("s")?,
        u_star: vecf("u_star")?,
        f_conj: ratf("f_conj")?,
        v_star: vecf("v_star")?,
        c_support: ratf("c_support")?,
        multipliers,
    })
}

pub fn kkt(c: &KktCertificate, names: &[String]) -> Value {
    let ms: Vec<Value> = c
        .j
        .iter()
        .zip(&c.lambda)
        .zip(&c.u_j)
        .map(|((&j, lam), u)| {
            json!({
                "index": j,
                "name": names.get(j).cloned().unwrap_or_default(),
                "lambda": q(lam),
                "u": qv(u),
            })
        })
        .collect();
    json!({ "u_star": qv(&c.u_star), "v_star": qv(&c.v_star), "multipliers": ms })
}

pub fn hidden_diagnosis(d: &HiddenDiagnosis) -> Value {
    json!({
        "system_consistent": d.system_consistent,
        "recession_witness": d.recession_witness.as_ref().map(|w| qv(w)),
    })
}

pub fn fm_status(s: &FmStatus) -> Value {
    match s {
        FmStatus::Fm => json!({ "farkas_minkowski": true }),
        FmStatus::NotFm(NotFmReason::EmptySolutionSet) => {
            json!({ "farkas_minkowski": false, "reason": "empty solution set" })
        }
        FmStatus::NotFm(NotFmReason::OpenCone { offending_ray }) => json!({
            "farkas_minkowski": false,
            "reason": "characteristic cone is not closed",
            "offending_ray": qv(offending_ray),
        }),
    }
}

pub fn closedness(c: Closedness) -> &'static str {
    match c {
        Closedness::FarkasMinkowskiRealValued => "farkas-minkowski system with real-valued objective",
        Closedness::GeneratorsInSet => "every generator of the closure lies in the set",
        Closedness::Unverified => "unverified",
    }
}

/// The fixed outer object of every report.
pub fn envelope(command: &str, digest: Option<&str>, seed: u64, result: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "input_digest": digest,
        "seed": seed,
        "result": result,
    })
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}
