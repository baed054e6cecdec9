//! Problem files: a system, an objective and query parameters, all rationals exact.
//!
//! Rationals are written as JSON integers or as `"p/q"` strings. Every parse error
//! carries the JSON path of the offending value.

use std::fmt;

use farkas_core::convexfn::PolyhedralFunction;
use farkas_core::farkas::{ConvexSystem, SystemConstraint};
use farkas_core::ratgeom::{HRep, Polyhedron};
use farkas_core::rational::parse_rational;
use farkas_core::{QVec, Rational};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for InputError {}

type Parsed<T> = Result<T, InputError>;

fn fail<T>(path: &str, message: impl Into<String>) -> Parsed<T> {
    Err(InputError {
        path: path.to_string(),
        message: message.into(),
    })
}

/// Query parameters; which ones are needed depends on the command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    pub kind: Option<String>,
    pub x_star: Option<QVec>,
    pub s: Option<Rational>,
    pub x_bar: Option<QVec>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub name: Option<String>,
    pub sigma: ConvexSystem,
    pub objective: Option<PolyhedralFunction>,
    pub query: Query,
    /// SHA-256 of the raw file bytes.
    pub digest: String,
}

impl Problem {
    pub fn objective(&self) -> Parsed<&PolyhedralFunction> {
        self.objective.as_ref().ok_or(InputError {
            path: "objective".into(),
            message: "missing (this command needs an objective)".into(),
        })
    }

    pub fn x_star(&self) -> Parsed<&QVec> {
        self.query.x_star.as_ref().ok_or(InputError {
            path: "query.x_star".into(),
            message: "missing".into(),
        })
    }

    pub fn s(&self) -> Parsed<&Rational> {
        self.query.s.as_ref().ok_or(InputError {
            path: "query.s".into(),
            message: "missing".into(),
        })
    }

    pub fn x_bar(&self) -> Parsed<&QVec> {
        self.query.x_bar.as_ref().ok_or(InputError {
            path: "query.x_bar".into(),
            message: "missing".into(),
        })
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_problem(bytes: &[u8]) -> Parsed<Problem> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| InputError {
        path: String::new(),
        message: format!("invalid JSON: {e}"),
    })?;
    let obj = object(&root, "")?;
    let n = natural(field(obj, "dimension", "")?, "dimension")?;
    if n == 0 {
        return fail("dimension", "must be at least 1");
    }
    let name = match obj.get("name") {
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return fail("name", "expected a string"),
        None => None,
    };
    let c = match obj.get("C") {
        Some(v) => Some(polyhedron(v, n, "C")?),
        None => None,
    };
    let mut constraints = Vec::new();
    if let Some(v) = obj.get("constraints") {
        for (i, item) in array(v, "constraints")?.iter().enumerate() {
            let path = format!("constraints[{i}]");
            let name = match item.get("name") {
                Some(Value::String(s)) => s.clone(),
                Some(_) => return fail(&format!("{path}.name"), "expected a string"),
                None => format!("f{}", i + 1),
            };
            constraints.push(SystemConstraint {
                name,
                f: function(item, n, &path)?,
            });
        }
    }
    let sigma = ConvexSystem::new(n, c, constraints).map_err(|e| InputError {
        path: "C".into(),
        message: e.to_string(),
    })?;
    let objective = match obj.get("objective") {
        Some(v) => Some(function(v, n, "objective")?),
        None => None,
    };
    let query = match obj.get("query") {
        Some(v) => query(v, n)?,
        None => Query::default(),
    };
    Ok(Problem {
        name,
        sigma,
        objective,
        query,
        digest: digest(bytes),
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Parsed<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| fail(path, "expected an object"), Ok)
}

fn array<'a>(v: &'a Value, path: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array().map_or_else(|| fail(path, "expected an array"), Ok)
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Parsed<&'a Value> {
    obj.get(key).map_or_else(|| fail(&join(path, key), "missing"), Ok)
}

fn natural(v: &Value, path: &str) -> Parsed<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .map_or_else(|| fail(path, "expected a non-negative integer"), Ok)
}

pub fn rational(v: &Value, path: &str) -> Parsed<Rational> {
    match v {
        Value::Number(num) if num.is_i64() || num.is_u64() => {
            parse_rational(&num.to_string()).map_or_else(|| fail(path, "bad integer"), Ok)
        }
        Value::Number(_) => fail(path, "floats are not accepted; write \"p/q\""),
        Value::String(s) => parse_rational(s).map_or_else(|| fail(path, format!("not a rational: {s:?}")), Ok),
        _ => fail(path, "expected an integer or a \"p/q\" string"),
    }
}

pub fn vector(v: &Value, n: usize, path: &str) -> Parsed<QVec> {
    let items = array(v, path)?;
    if items.len() != n {
        return fail(path, format!("expected {n} entries, found {}", items.len()));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn hrep(v: &Value, dim: usize, path: &str) -> Parsed<HRep> {
    let obj = object(v, path)?;
    let mut h = HRep::new(dim);
    for (key, equality) in [("inequalities", false), ("equalities", true)] {
        let Some(rows) = obj.get(key) else { continue };
        let rows_path = join(path, key);
        for (i, row) in array(rows, &rows_path)?.iter().enumerate() {
            let p = format!("{rows_path}[{i}]");
            let r = object(row, &p)?;
            let a = vector(field(r, "a", &p)?, dim, &join(&p, "a"))?;
            let b = rational(field(r, "b", &p)?, &join(&p, "b"))?;
            if equality {
                h.push_eq(a, b);
            } else {
                h.push_ineq(a, b);
            }
        }
    }
    Ok(h)
}

fn polyhedron(v: &Value, dim: usize, path: &str) -> Parsed<Polyhedron> {
    Polyhedron::from_h(hrep(v, dim, path)?).map_err(|e| InputError {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn function(v: &Value, n: usize, path: &str) -> Parsed<PolyhedralFunction> {
    let obj = object(v, path)?;
    let form = match field(obj, "form", path)? {
        Value::String(s) => s.as_str(),
        _ => return fail(&join(path, "form"), "expected a string"),
    };
    let a = |p: &str| -> Parsed<QVec> { vector(field(obj, "a", p)?, n, &join(p, "a")) };
    let b = |p: &str| -> Parsed<Rational> { rational(field(obj, "b", p)?, &join(p, "b")) };
    let set = |p: &str| -> Parsed<Polyhedron> { polyhedron(field(obj, "set", p)?, n, &join(p, "set")) };
    let built = match form {
        "affine" => PolyhedralFunction::affine(a(path)?, b(path)?),
        "max_affine" => {
            let pieces_path = join(path, "pieces");
            let mut pieces = Vec::new();
            for (i, piece) in array(field(obj, "pieces", path)?, &pieces_path)?.iter().enumerate() {
                let p = format!("{pieces_path}[{i}]");
                let po = object(piece, &p)?;
                let pa = vector(field(po, "a", &p)?, n, &join(&p, "a"))?;
                let pb = rational(field(po, "b", &p)?, &join(&p, "b"))?;
                pieces.push((pa, pb));
            }
            if pieces.is_empty() {
                return fail(&pieces_path, "needs at least one piece");
            }
            PolyhedralFunction::max_affine(pieces)
        }
        "indicator" => PolyhedralFunction::indicator(&set(path)?),
        "affine_on" => PolyhedralFunction::affine_on(a(path)?, b(path)?, &set(path)?),
        "epigraph" => {
            let epi = polyhedron(field(obj, "set", path)?, n + 1, &join(path, "set"))?;
            PolyhedralFunction::from_epigraph(epi)
        }
        other => {
            return fail(
                &join(path, "form"),
                format!("unknown form {other:?} (affine, max_affine, indicator, affine_on, epigraph)"),
            )
        }
    };
    built.map_err(|e| InputError {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn query(v: &Value, n: usize) -> Parsed<Query> {
    let obj = object(v, "query")?;
    let kind = match obj.get("kind") {
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return fail("query.kind", "expected a string"),
        None => None,
    };
    let opt_vec = |key: &str| -> Parsed<Option<QVec>> {
        obj.get(key)
            .map(|x| vector(x, n, &format!("query.{key}")))
            .transpose()
    };
    Ok(Query {
        kind,
        x_star: opt_vec("x_star")?,
        s: obj.get("s").map(|x| rational(x, "query.s")).transpose()?,
        x_bar: opt_vec("x_bar")?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_name_the_path() {
        let src = br#"{"dimension": 2, "constraints": [{"form": "affine", "a": [1, "x"], "b": 0}]}"#;
        let e = parse_problem(src).unwrap_err();
        assert_eq!(e.path, "constraints[0].a[1]");

        let e = parse_problem(br#"{"dimension": 1, "objective": {"form": "affine", "a": [0.5], "b": 0}}"#).unwrap_err();
        assert_eq!(e.path, "objective.a[0]");

        let e = parse_problem(br#"{"dimension": 1, "query": {"x_star": [1, 2]}}"#).unwrap_err();
        assert_eq!(e.path, "query.x_star");

        let e = parse_problem(br#"{"dimension": 1, "constraints": [{"form": "cubic"}]}"#).unwrap_err();
        assert_eq!(e.path, "constraints[0].form");
    }

    #[test]
    fn rationals_as_strings() {
        let p = parse_problem(br#"{"dimension": 1, "query": {"x_star": ["-3/6"], "s": "2"}}"#).unwrap();
        assert_eq!(p.x_star().unwrap()[0], Rational::new((-1).into(), 2.into()));
        assert_eq!(p.s().unwrap(), &Rational::from_integer(2.into()));
        assert_eq!(p.x_bar().unwrap_err().path, "query.x_bar");
    }
}
