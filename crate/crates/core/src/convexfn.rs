//! Polyhedral convex functions, stored as the H-representation of the epigraph
//! in `Q^(n+1)` with the function value as the last coordinate.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlp;
use crate::ratgeom::{Constraint, HRep, Polyhedron, Repr, VRep};
use crate::rational::{dot, zeros, QVec, Rational};

/// A value in `Q ∪ {+inf}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtendedValue {
    Finite(Rational),
    PlusInfinity,
}

impl ExtendedValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            ExtendedValue::PlusInfinity => None,
        }
    }

    /// Sum with `+inf` absorbing.
    pub fn plus(&self, other: &ExtendedValue) -> ExtendedValue {
        match (self, other) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => ExtendedValue::Finite(a + b),
            _ => ExtendedValue::PlusInfinity,
        }
    }

    /// `self <= bound`; false when infinite.
    pub fn at_most(&self, bound: &Rational) -> bool {
        self.finite().is_some_and(|v| v <= bound)
    }
}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => a.cmp(b),
            (ExtendedValue::Finite(_), ExtendedValue::PlusInfinity) => Less,
            (ExtendedValue::PlusInfinity, ExtendedValue::Finite(_)) => Greater,
            (ExtendedValue::PlusInfinity, ExtendedValue::PlusInfinity) => Equal,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PlusInfinity => f.write_str("+inf"),
        }
    }
}

/// Constructor forms accepted by [`PolyhedralFunction::build`].
#[derive(Debug, Clone)]
pub enum FunctionForm {
    /// `x -> a.x + b`
    Affine { a: QVec, b: Rational },
    /// `x -> max_k a_k.x + b_k`
    MaxAffine(Vec<(QVec, Rational)>),
    Indicator(Polyhedron),
    /// `a.x + b` on the set, `+inf` outside.
    AffineOn { a: QVec, b: Rational, set: Polyhedron },
    /// Epigraph rows in `Q^(n+1)`.
    RawEpigraph(HRep),
}

#[derive(Clone)]
pub struct PolyhedralFunction {
    n: usize,
    epi: Polyhedron,
    conj: Arc<OnceLock<PolyhedralFunction>>,
}

impl fmt::Debug for PolyhedralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolyhedralFunction")
            .field("n", &self.n)
            .field("epi", &self.epi)
            .finish()
    }
}

fn affine_row(a: &[Rational], b: &Rational) -> Constraint {
    let mut row = a.to_vec();
    row.push(-Rational::one());
    Constraint { row, rhs: -b }
}

fn lift_rows(set: &HRep) -> HRep {
    set.embed(set.dim + 1, 0)
}

impl PolyhedralFunction {
    pub fn build(form: FunctionForm) -> Result<Self> {
        match form {
            FunctionForm::Affine { a, b } => Self::max_affine(vec![(a, b)]),
            FunctionForm::MaxAffine(pieces) => Self::max_affine(pieces),
            FunctionForm::Indicator(set) => Self::indicator(&set),
            FunctionForm::AffineOn { a, b, set } => Self::affine_on(a, b, &set),
            FunctionForm::RawEpigraph(h) => Self::from_epigraph(Polyhedron::from_h(h)?),
        }
    }

    pub fn affine(a: QVec, b: Rational) -> Result<Self> {
        Self::max_affine(vec![(a, b)])
    }

    pub fn zero(n: usize) -> Self {
        Self::affine(zeros(n), Rational::zero()).expect("zero function is proper")
    }

    pub fn max_affine(pieces: Vec<(QVec, Rational)>) -> Result<Self> {
        let Some(n) = pieces.first().map(|(a, _)| a.len()) else {
            return Err(Error::ImproperFunction("max of no affine pieces".into()));
        };
        let mut h = HRep::new(n + 1);
        for (a, b) in &pieces {
            check_dim(n, a.len())?;
            h.inequalities.push(affine_row(a, b));
        }
        Self::from_epigraph(Polyhedron::from_h(h)?)
    }

    pub fn indicator(set: &Polyhedron) -> Result<Self> {
        let mut h = lift_rows(set.h()?);
        let n = set.dim();
        let mut row = zeros(n + 1);
        row[n] = -Rational::one();
        h.push_ineq(row, Rational::zero());
        Self::from_epigraph(Polyhedron::from_h(h)?)
    }

    pub fn affine_on(a: QVec, b: Rational, set: &Polyhedron) -> Result<Self> {
        check_dim(set.dim(), a.len())?;
        let mut h = lift_rows(set.h()?);
        h.inequalities.push(affine_row(&a, &b));
        Self::from_epigraph(Polyhedron::from_h(h)?)
    }

    /// Validates an epigraph: nonempty, closed upward in `t`, bounded below in `t`.
    pub fn from_epigraph(epi: Polyhedron) -> Result<Self> {
        if epi.dim() == 0 {
            return Err(Error::ImproperFunction("epigraph needs a value coordinate".into()));
        }
        let n = epi.dim() - 1;
        let h = epi.h()?;
        if h.inequalities.iter().any(|c| c.row[n].is_positive()) {
            return Err(Error::ImproperFunction("inequality with positive value coefficient".into()));
        }
        if h.equalities.iter().any(|c| !c.row[n].is_zero()) {
            return Err(Error::ImproperFunction("equality involving the value coordinate".into()));
        }
        if !h.inequalities.iter().any(|c| c.row[n].is_negative()) {
            return Err(Error::ImproperFunction("value unbounded below".into()));
        }
        if epi.is_empty()? {
            return Err(Error::ImproperFunction("empty epigraph".into()));
        }
        Ok(PolyhedralFunction {
            n,
            epi,
            conj: Arc::new(OnceLock::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epigraph(&self) -> &Polyhedron {
        &self.epi
    }

    pub fn epigraph_h(&self) -> Result<&HRep> {
        self.epi.h()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<ExtendedValue> {
        check_dim(self.n, x.len())?;
        let h = self.epi.h()?;
        let n = self.n;
        for c in &h.equalities {
            if dot(&c.row[..n], x) != c.rhs {
                return Ok(ExtendedValue::PlusInfinity);
            }
        }
        let mut best: Option<Rational> = None;
        for c in &h.inequalities {
            let ax = dot(&c.row[..n], x);
            let ct = &c.row[n];
            if ct.is_zero() {
                if ax > c.rhs {
                    return Ok(ExtendedValue::PlusInfinity);
                }
            } else {
                let v = (ax - &c.rhs) / -ct;
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        Ok(ExtendedValue::Finite(best.expect("proper function has a value row")))
    }

    /// Fenchel conjugate, built from the generators of the epigraph. Memoized.
    pub fn conjugate(&self) -> Result<&PolyhedralFunction> {
        if let Some(c) = self.conj.get() {
            return Ok(c);
        }
        let c = conjugate_of(self.n, self.epi.v()?)?;
        // the conjugate of the conjugate is this function
        let _ = c.conj.set(self.clone_without_cache());
        Ok(self.conj.get_or_init(|| c))
    }

    fn clone_without_cache(&self) -> PolyhedralFunction {
        PolyhedralFunction {
            n: self.n,
            epi: self.epi.clone(),
            conj: Arc::new(OnceLock::new()),
        }
    }

    pub fn domain(&self) -> Result<Polyhedron> {
        let keep: Vec<usize> = (0..self.n).collect();
        self.epi.project(&keep)
    }

    /// True when the function is finite everywhere.
    pub fn is_real_valued(&self) -> Result<bool> {
        let h = self.epi.h()?;
        let n = self.n;
        let finite_everywhere = h.equalities.iter().all(|c| c.row[..n].iter().all(Zero::is_zero))
            && h.inequalities
                .iter()
                .filter(|c| c.row[n].is_zero())
                .all(|c| c.row[..n].iter().all(Zero::is_zero));
        if finite_everywhere {
            return Ok(true);
        }
        Ok(self.domain()?.v()?.lineality.len() == self.n)
    }

    /// Positively homogeneous function whose epigraph is the recession cone of `epi f`.
    pub fn recession_function(&self) -> Result<PolyhedralFunction> {
        PolyhedralFunction::from_epigraph(self.epi.recession_cone()?)
    }

    /// `{y : f(x) + f*(y) = <y, x>}`, from the conjugate's rows with `r = <y,x> - f(x)`.
    pub fn subdifferential(&self, x: &[Rational]) -> Result<Polyhedron> {
        let fx = match self.evaluate(x)? {
            ExtendedValue::Finite(v) => v,
            ExtendedValue::PlusInfinity => return Err(Error::PointOutsideDomain),
        };
        let conj = self.conjugate()?;
        let h = conj.epi.h()?;
        let n = self.n;
        let subst = |c: &Constraint| {
            let ct = &c.row[n];
            let row: QVec = c.row[..n].iter().zip(x).map(|(a, xi)| a + ct * xi).collect();
            Constraint {
                row,
                rhs: &c.rhs + ct * &fx,
            }
        };
        Polyhedron::from_h(HRep {
            dim: n,
            inequalities: h.inequalities.iter().map(subst).collect(),
            equalities: h.equalities.iter().map(subst).collect(),
        })
    }

    /// Support function of `epi f*` at `(x, r)`.
    pub fn perspective_support(&self, x: &[Rational], r: &Rational) -> Result<ExtendedValue> {
        check_dim(self.n, x.len())?;
        let mut q = x.to_vec();
        q.push(r.clone());
        support_eval(self.conjugate()?.epigraph(), &q)
    }

    /// `f + delta_D`.
    pub fn add_indicator(&self, d: &Polyhedron) -> Result<PolyhedralFunction> {
        check_dim(self.n, d.dim())?;
        let h = self.epi.h()?.intersect(&lift_rows(d.h()?))?;
        let epi = Polyhedron::from_h(h)?;
        if epi.is_empty()? {
            return Err(Error::ImproperSum);
        }
        PolyhedralFunction::from_epigraph(epi)
    }

    /// `[f <= r]` as an H-representation in `Q^n`.
    pub fn sublevel_h(&self, r: &Rational) -> Result<HRep> {
        let h = self.epi.h()?;
        let n = self.n;
        let fix = |c: &Constraint| Constraint {
            row: c.row[..n].to_vec(),
            rhs: &c.rhs - &c.row[n] * r,
        };
        Ok(HRep {
            dim: n,
            inequalities: h.inequalities.iter().map(fix).collect(),
            equalities: h.equalities.iter().map(fix).collect(),
        })
    }

    pub fn sublevel(&self, r: &Rational) -> Result<Polyhedron> {
        Polyhedron::from_h(self.sublevel_h(r)?)
    }

    /// Epigraph equality.
    pub fn equals(&self, other: &PolyhedralFunction) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        self.epi.equals(&other.epi)
    }

    /// Some point of the domain.
    pub fn domain_point(&self) -> Result<QVec> {
        let p = exactlp::feasible_point(self.epi.h()?)?.expect("proper function");
        Ok(p[..self.n].to_vec())
    }

    /// The same function with both epigraph representations populated.
    pub fn minimized(&self) -> Result<PolyhedralFunction> {
        Ok(PolyhedralFunction {
            n: self.n,
            epi: self.epi.convert(Repr::V)?,
            conj: self.conj.clone(),
        })
    }
}

fn conjugate_of(n: usize, v: &VRep) -> Result<PolyhedralFunction> {
    let mut h = HRep::new(n + 1);
    for p in &v.points {
        let mut row = p[..n].to_vec();
        row.push(-Rational::one());
        h.push_ineq(row, p[n].clone());
    }
    for d in &v.rays {
        if d[..n].iter().all(Zero::is_zero) {
            // the vertical ray only asks 0 <= s
            continue;
        }
        let mut row = d[..n].to_vec();
        row.push(Rational::zero());
        h.push_ineq(row, d[n].clone());
    }
    for l in &v.lineality {
        let mut row = l[..n].to_vec();
        row.push(Rational::zero());
        h.push_eq(row, l[n].clone());
    }
    PolyhedralFunction::from_epigraph(Polyhedron::from_h(h)?)
}

/// `sup {<a, x> : x in D}`.
pub fn support_eval(d: &Polyhedron, a: &[Rational]) -> Result<ExtendedValue> {
    check_dim(d.dim(), a.len())?;
    let v = d.v()?;
    if v.points.is_empty() {
        return Err(Error::EmptyOperand);
    }
    if v.rays.iter().any(|r| dot(a, r).is_positive()) || v.lineality.iter().any(|l| !dot(a, l).is_zero()) {
        return Ok(ExtendedValue::PlusInfinity);
    }
    let best = v.points.iter().map(|p| dot(a, p)).max().expect("nonempty");
    Ok(ExtendedValue::Finite(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, ratio};

    fn set(dim: usize, ineqs: &[(&[i64], i64)], eqs: &[(&[i64], i64)]) -> Polyhedron {
        let mut h = HRep::new(dim);
        for (r, b) in ineqs {
            h.push_ineq(ivec(r), int(*b));
        }
        for (r, b) in eqs {
            h.push_eq(ivec(r), int(*b));
        }
        Polyhedron::from_h(h).unwrap()
    }

    fn example1_f() -> PolyhedralFunction {
        let s = set(2, &[(&[-1, 0], 0)], &[(&[1, -1], 0)]);
        PolyhedralFunction::affine_on(ivec(&[-1, 0]), int(0), &s).unwrap()
    }

    fn abs() -> PolyhedralFunction {
        PolyhedralFunction::max_affine(vec![(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap()
    }

    fn fin(v: i64) -> ExtendedValue {
        ExtendedValue::Finite(int(v))
    }

    #[test]
    fn evaluate_examples() {
        let f = example1_f();
        assert_eq!(f.evaluate(&ivec(&[1, 1])).unwrap(), fin(-1));
        assert_eq!(f.evaluate(&ivec(&[1, 0])).unwrap(), ExtendedValue::PlusInfinity);
        let g = PolyhedralFunction::affine(ivec(&[2]), int(1)).unwrap();
        assert_eq!(g.evaluate(&ivec(&[3])).unwrap(), fin(7));
    }

    #[test]
    fn rejects_improper_epigraphs() {
        let mut h = HRep::new(2);
        h.push_ineq(ivec(&[0, 1]), int(-1));
        assert!(matches!(
            PolyhedralFunction::build(FunctionForm::RawEpigraph(h)),
            Err(Error::ImproperFunction(_))
        ));
        let mut h = HRep::new(2);
        h.push_ineq(ivec(&[1, 0]), int(0));
        assert!(matches!(
            PolyhedralFunction::build(FunctionForm::RawEpigraph(h)),
            Err(Error::ImproperFunction(_))
        ));
        let empty = set(1, &[(&[1], -1), (&[-1], -1)], &[]);
        assert!(PolyhedralFunction::indicator(&empty).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let fs = example1_f();
        let c = fs.conjugate().unwrap();
        let expect = PolyhedralFunction::indicator(&set(2, &[(&[1, 1], -1)], &[])).unwrap();
        assert!(c.equals(&expect).unwrap());

        let box1 = PolyhedralFunction::indicator(&set(1, &[(&[1], 1), (&[-1], 1)], &[])).unwrap();
        assert!(box1.conjugate().unwrap().equals(&abs()).unwrap());

        let aff = PolyhedralFunction::affine(ivec(&[2, -1]), int(3)).unwrap();
        let expect = PolyhedralFunction::affine_on(
            ivec(&[0, 0]),
            int(-3),
            &Polyhedron::point(ivec(&[2, -1])),
        )
        .unwrap();
        assert!(aff.conjugate().unwrap().equals(&expect).unwrap());
    }

    #[test]
    fn domain_examples() {
        let ray = Polyhedron::cone(2, vec![ivec(&[1, 1])], vec![]).unwrap();
        assert!(example1_f().domain().unwrap().equals(&ray).unwrap());
        let aff = PolyhedralFunction::affine(ivec(&[1, 1]), int(0)).unwrap();
        assert!(aff.domain().unwrap().equals(&Polyhedron::universe(2)).unwrap());
        assert!(aff.is_real_valued().unwrap());
        let p = set(1, &[(&[1], 1), (&[-1], 1)], &[]);
        let ind = PolyhedralFunction::indicator(&p).unwrap();
        assert!(ind.domain().unwrap().equals(&p).unwrap());
        assert!(!ind.is_real_valued().unwrap());
    }

    #[test]
    fn support_examples() {
        let f = example1_f();
        let epi_conj = f.conjugate().unwrap().epigraph().clone();
        assert_eq!(support_eval(&epi_conj, &ivec(&[1, 1, 0])).unwrap(), fin(-1));
        let k = set(3, &[(&[1, 1, 0], 0), (&[0, 1, -1], 0)], &[]);
        assert_eq!(support_eval(&k, &ivec(&[1, 1, 0])).unwrap(), fin(0));
        let a = Polyhedron::from_v(
            2,
            VRep {
                points: vec![ivec(&[0, 1])],
                rays: vec![ivec(&[1, 1])],
                lineality: vec![],
            },
        )
        .unwrap();
        assert_eq!(support_eval(&a, &ivec(&[-1, -1])).unwrap(), fin(-1));
        assert_eq!(support_eval(&a, &ivec(&[1, 0])).unwrap(), ExtendedValue::PlusInfinity);
        assert_eq!(support_eval(&Polyhedron::empty(2), &ivec(&[1, 0])), Err(Error::EmptyOperand));
    }

    #[test]
    fn recession_examples() {
        let r = example1_f().recession_function().unwrap();
        assert_eq!(r.evaluate(&ivec(&[1, 1])).unwrap(), fin(-1));
        let aff = PolyhedralFunction::affine(ivec(&[3]), int(5)).unwrap();
        let lin = PolyhedralFunction::affine(ivec(&[3]), int(0)).unwrap();
        assert!(aff.recession_function().unwrap().equals(&lin).unwrap());
        let p = set(1, &[(&[1], 1), (&[-1], 0)], &[]);
        let ind = PolyhedralFunction::indicator(&p).unwrap();
        let expect = PolyhedralFunction::indicator(&p.recession_cone().unwrap()).unwrap();
        assert!(ind.recession_function().unwrap().equals(&expect).unwrap());
    }

    #[test]
    fn subdifferential_examples() {
        let f = abs();
        let at0 = f.subdifferential(&ivec(&[0])).unwrap();
        assert!(at0.equals(&set(1, &[(&[1], 1), (&[-1], 1)], &[])).unwrap());
        let at2 = f.subdifferential(&ivec(&[2])).unwrap();
        assert!(at2.equals(&Polyhedron::point(ivec(&[1]))).unwrap());
        let ind = PolyhedralFunction::indicator(&set(1, &[(&[-1], 0)], &[])).unwrap();
        let normal = ind.subdifferential(&ivec(&[0])).unwrap();
        assert!(normal.equals(&set(1, &[(&[1], 0)], &[])).unwrap());
        assert_eq!(ind.subdifferential(&ivec(&[-1])).unwrap_err(), Error::PointOutsideDomain);
    }

    #[test]
    fn perspective_examples() {
        let f = example1_f();
        assert_eq!(f.perspective_support(&ivec(&[1, 1]), &int(0)).unwrap(), fin(-1));
        assert_eq!(f.perspective_support(&ivec(&[2, 2]), &int(-1)).unwrap(), fin(-2));
        assert_eq!(
            abs().perspective_support(&ivec(&[0]), &int(1)).unwrap(),
            ExtendedValue::PlusInfinity
        );
        assert_eq!(
            abs().perspective_support(&[ratio(-3, 2)], &int(-1)).unwrap(),
            ExtendedValue::Finite(ratio(3, 2))
        );
    }

    #[test]
    fn add_indicator_examples() {
        let a = Polyhedron::from_v(
            2,
            VRep {
                points: vec![ivec(&[0, 1])],
                rays: vec![ivec(&[1, 1])],
                lineality: vec![],
            },
        )
        .unwrap();
        assert_eq!(example1_f().add_indicator(&a).unwrap_err(), Error::ImproperSum);
        let aff = PolyhedralFunction::affine(ivec(&[1, 2]), int(1)).unwrap();
        assert!(aff.add_indicator(&Polyhedron::universe(2)).unwrap().equals(&aff).unwrap());
        let g = abs().add_indicator(&set(1, &[(&[1], 2), (&[-1], -1)], &[])).unwrap();
        assert_eq!(g.evaluate(&ivec(&[2])).unwrap(), fin(2));
        assert_eq!(g.evaluate(&ivec(&[0])).unwrap(), ExtendedValue::PlusInfinity);
    }

    #[test]
    fn biconjugate_of_example() {
        let f = example1_f();
        let cc = f.conjugate().unwrap().conjugate().unwrap();
        assert!(cc.equals(&f).unwrap());
        let g = PolyhedralFunction::max_affine(vec![(ivec(&[1, 0]), int(1)), (ivec(&[0, -1]), int(0))]).unwrap();
        let fresh = conjugate_of(2, g.conjugate().unwrap().epigraph().v().unwrap()).unwrap();
        assert!(fresh.equals(&g).unwrap());
    }
}
