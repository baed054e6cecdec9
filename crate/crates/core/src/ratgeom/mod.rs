//! Exact polyhedral geometry.
//!
//! A [`Polyhedron`] carries an H-representation (inequalities and equalities),
//! a V-representation (points, rays, lineality), or both. The missing one is
//! computed on first access by the double description method and cached;
//! the represented set never changes.

mod dd;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactlp::{self, LinearProgram, LpStatus, Sense};
use crate::rational::{add, canonical_line, dot, fmt_vec, is_zero, neg, primitive, QVec, Rational};

/// A single linear relation `row . x (<= | =) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub row: QVec,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(row: QVec, rhs: Rational) -> Self {
        Constraint { row, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    /// `row . x <= rhs`
    pub inequalities: Vec<Constraint>,
    /// `row . x = rhs`
    pub equalities: Vec<Constraint>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn push_ineq(&mut self, row: QVec, rhs: Rational) -> &mut Self {
        self.inequalities.push(Constraint { row, rhs });
        self
    }

    pub fn push_eq(&mut self, row: QVec, rhs: Rational) -> &mut Self {
        self.equalities.push(Constraint { row, rhs });
        self
    }

    pub fn validate(&self) -> Result<()> {
        for c in self.inequalities.iter().chain(&self.equalities) {
            check_dim(self.dim, c.row.len())?;
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|c| dot(&c.row, x) <= c.rhs)
            && self.equalities.iter().all(|c| dot(&c.row, x) == c.rhs)
    }

    /// Homogeneous check used for rays: `A d <= 0, E d = 0`.
    pub fn recedes_along(&self, d: &[Rational]) -> bool {
        self.inequalities.iter().all(|c| !dot(&c.row, d).is_positive())
            && self.equalities.iter().all(|c| dot(&c.row, d).is_zero())
    }

    pub fn is_invariant_along(&self, l: &[Rational]) -> bool {
        self.inequalities
            .iter()
            .chain(&self.equalities)
            .all(|c| dot(&c.row, l).is_zero())
    }

    pub fn intersect(&self, other: &HRep) -> Result<HRep> {
        check_dim(self.dim, other.dim)?;
        let mut h = self.clone();
        h.inequalities.extend(other.inequalities.iter().cloned());
        h.equalities.extend(other.equalities.iter().cloned());
        Ok(h)
    }

    /// Embeds into a larger space: variable `j` of `self` becomes `offset + j`.
    pub fn embed(&self, total: usize, offset: usize) -> HRep {
        let lift = |c: &Constraint| {
            let mut row = vec![Rational::zero(); total];
            row[offset..offset + self.dim].clone_from_slice(&c.row);
            Constraint {
                row,
                rhs: c.rhs.clone(),
            }
        };
        HRep {
            dim: total,
            inequalities: self.inequalities.iter().map(lift).collect(),
            equalities: self.equalities.iter().map(lift).collect(),
        }
    }

    /// Indices of inequality rows implied by the remaining rows (decided by LP).
    pub fn redundant_inequalities(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.inequalities.len() {
            let mut rest = self.clone();
            let row = rest.inequalities.remove(i);
            let lp = LinearProgram::new(row.row.clone(), Sense::Max, rest);
            let res = exactlp::solve(&lp)?;
            let implied = match res.status {
                LpStatus::Infeasible => true,
                LpStatus::Unbounded => false,
                LpStatus::Optimal => res.value.as_ref().is_some_and(|v| *v <= row.rhs),
            };
            if implied {
                out.push(i);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VRep {
    pub points: Vec<QVec>,
    pub rays: Vec<QVec>,
    pub lineality: Vec<QVec>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn validate(&self, dim: usize) -> Result<()> {
        for v in self.points.iter().chain(&self.rays).chain(&self.lineality) {
            check_dim(dim, v.len())?;
        }
        Ok(())
    }

    /// Canonical form: lineality in reduced echelon form, points and rays
    /// reduced modulo lineality, rays primitive, everything sorted and deduplicated.
    fn canonical(mut self) -> VRep {
        let basis = rref(&self.lineality);
        let reduce = |v: &QVec| -> QVec {
            let mut v = v.clone();
            for (p, row) in &basis {
                if !v[*p].is_zero() {
                    let f = v[*p].clone();
                    for (x, r) in v.iter_mut().zip(row) {
                        *x -= &f * r;
                    }
                }
            }
            v
        };
        let mut points: Vec<QVec> = self.points.iter().map(reduce).collect();
        points.sort();
        points.dedup();
        let mut rays: Vec<QVec> = self
            .rays
            .iter()
            .map(|r| primitive(&reduce(r)))
            .filter(|r| !is_zero(r))
            .collect();
        rays.sort();
        rays.dedup();
        self.lineality = basis.into_iter().map(|(_, r)| canonical_line(&r)).collect();
        self.points = points;
        self.rays = rays;
        self
    }
}

/// Reduced row echelon form; returns `(pivot column, row)` with unit pivots.
fn rref(rows: &[QVec]) -> Vec<(usize, QVec)> {
    let mut m: Vec<QVec> = rows.iter().filter(|r| !is_zero(r)).cloned().collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut out_rows = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(sel) = (out_rows..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(out_rows, sel);
        let inv = m[out_rows][col].recip();
        for x in m[out_rows].iter_mut() {
            *x *= &inv;
        }
        let prow = m[out_rows].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != out_rows && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        out_rows += 1;
        if out_rows == m.len() {
            break;
        }
    }
    pivots.into_iter().zip(m).collect()
}

fn integer_row(v: &[Rational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&den / x.denom())).collect()
}

fn to_rational(v: &[BigInt]) -> QVec {
    v.iter().cloned().map(Rational::from_integer).collect()
}

fn h_to_v(h: &HRep) -> Result<VRep> {
    let d = h.dim + 1;
    let homog = |c: &Constraint| {
        let mut r = c.row.clone();
        r.push(-c.rhs.clone());
        integer_row(&r)
    };
    let mut ineqs: Vec<Vec<BigInt>> = Vec::with_capacity(h.inequalities.len() + 1);
    let mut t_nonneg = vec![BigInt::zero(); d];
    t_nonneg[h.dim] = -BigInt::one();
    ineqs.push(t_nonneg);
    ineqs.extend(h.inequalities.iter().map(homog));
    let eqs: Vec<Vec<BigInt>> = h.equalities.iter().map(homog).collect();
    let gens = dd::cone_generators(d, &ineqs, &eqs)?;

    let mut v = VRep::default();
    for r in &gens.rays {
        let t = &r[h.dim];
        if t.is_positive() {
            let t = Rational::from_integer(t.clone());
            v.points.push(r[..h.dim].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect());
        } else {
            v.rays.push(to_rational(&r[..h.dim]));
        }
    }
    if v.points.is_empty() {
        return Ok(VRep::default());
    }
    for l in &gens.lineality {
        debug_assert!(l[h.dim].is_zero());
        v.lineality.push(to_rational(&l[..h.dim]));
    }
    Ok(v.canonical())
}

fn v_to_h(dim: usize, v: &VRep) -> Result<HRep> {
    let mut h = HRep::new(dim);
    if v.points.is_empty() {
        h.push_ineq(vec![Rational::zero(); dim], -Rational::one());
        return Ok(h);
    }
    let d = dim + 1;
    let lift = |x: &QVec, t: i64| {
        let mut r = x.clone();
        r.push(Rational::from_integer(BigInt::from(t)));
        integer_row(&r)
    };
    let mut gens: Vec<Vec<BigInt>> = v.points.iter().map(|p| lift(p, 1)).collect();
    gens.extend(v.rays.iter().map(|r| lift(r, 0)));
    let lines: Vec<Vec<BigInt>> = v.lineality.iter().map(|l| lift(l, 0)).collect();
    let polar = dd::cone_generators(d, &gens, &lines)?;

    for a in &polar.rays {
        let row = to_rational(&a[..dim]);
        let rhs = -Rational::from_integer(a[dim].clone());
        if is_zero(&row) {
            debug_assert!(!rhs.is_negative());
            continue;
        }
        h.inequalities.push(Constraint { row, rhs });
    }
    let eq_rows: Vec<QVec> = polar
        .lineality
        .iter()
        .map(|a| {
            let mut r = to_rational(&a[..dim]);
            r.push(-Rational::from_integer(a[dim].clone()));
            r
        })
        .collect();
    for (_, r) in rref(&eq_rows) {
        let r = canonical_line(&r);
        if is_zero(&r[..dim]) {
            continue;
        }
        h.equalities.push(Constraint {
            row: r[..dim].to_vec(),
            rhs: r[dim].clone(),
        });
    }
    h.inequalities.sort();
    h.inequalities.dedup();
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    H,
    V,
}

#[derive(Clone)]
pub struct Polyhedron {
    dim: usize,
    h: OnceLock<HRep>,
    v: OnceLock<VRep>,
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polyhedron")
            .field("dim", &self.dim)
            .field("h", &self.h.get())
            .field("v", &self.v.get())
            .finish()
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.v.get() {
            if v.points.is_empty() {
                return write!(f, "empty set in Q^{}", self.dim);
            }
            let list = |xs: &[QVec]| xs.iter().map(|x| fmt_vec(x)).collect::<Vec<_>>().join(" ");
            write!(
                f,
                "points [{}] rays [{}] lines [{}]",
                list(&v.points),
                list(&v.rays),
                list(&v.lineality)
            )
        } else if let Some(h) = self.h.get() {
            let mut parts = Vec::new();
            for c in &h.inequalities {
                parts.push(format!("{} . x <= {}", fmt_vec(&c.row), c.rhs));
            }
            for c in &h.equalities {
                parts.push(format!("{} . x = {}", fmt_vec(&c.row), c.rhs));
            }
            write!(f, "{{{}}}", parts.join(", "))
        } else {
            unreachable!("a polyhedron always has a representation")
        }
    }
}

impl Polyhedron {
    pub fn from_h(h: HRep) -> Result<Self> {
        h.validate()?;
        Ok(Polyhedron {
            dim: h.dim,
            h: OnceLock::from(h),
            v: OnceLock::new(),
        })
    }

    /// Zero rays and lineality vectors are dropped.
    pub fn from_v(dim: usize, mut v: VRep) -> Result<Self> {
        v.validate(dim)?;
        v.rays.retain(|r| !is_zero(r));
        v.lineality.retain(|r| !is_zero(r));
        Ok(Polyhedron {
            dim,
            h: OnceLock::new(),
            v: OnceLock::from(v),
        })
    }

    pub fn universe(dim: usize) -> Self {
        Polyhedron::from_h(HRep::new(dim)).expect("empty constraint list")
    }

    pub fn empty(dim: usize) -> Self {
        Polyhedron::from_v(dim, VRep::default()).expect("no generators")
    }

    pub fn point(x: QVec) -> Self {
        let dim = x.len();
        Polyhedron::from_v(
            dim,
            VRep {
                points: vec![x],
                ..VRep::default()
            },
        )
        .expect("consistent dimension")
    }

    /// `cone(rays) + span(lineality)`, a closed cone.
    pub fn cone(dim: usize, rays: Vec<QVec>, lineality: Vec<QVec>) -> Result<Self> {
        Polyhedron::from_v(
            dim,
            VRep {
                points: vec![vec![Rational::zero(); dim]],
                rays,
                lineality,
            },
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn has(&self, repr: Repr) -> bool {
        match repr {
            Repr::H => self.h.get().is_some(),
            Repr::V => self.v.get().is_some(),
        }
    }

    pub fn h(&self) -> Result<&HRep> {
        if let Some(h) = self.h.get() {
            return Ok(h);
        }
        let v = self.v.get().expect("a polyhedron always has a representation");
        let h = v_to_h(self.dim, v)?;
        Ok(self.h.get_or_init(|| h))
    }

    pub fn v(&self) -> Result<&VRep> {
        if let Some(v) = self.v.get() {
            return Ok(v);
        }
        let h = self.h.get().expect("a polyhedron always has a representation");
        let v = h_to_v(h)?;
        Ok(self.v.get_or_init(|| v))
    }

    /// Returns the same set with an irredundant `target` representation populated.
    pub fn convert(&self, target: Repr) -> Result<Polyhedron> {
        match target {
            Repr::V => {
                let h = match self.h.get() {
                    Some(h) => h.clone(),
                    None => self.h()?.clone(),
                };
                let v = h_to_v(&h)?;
                Ok(Polyhedron {
                    dim: self.dim,
                    h: OnceLock::from(h),
                    v: OnceLock::from(v),
                })
            }
            Repr::H => {
                let v = match self.v.get() {
                    Some(v) => v.clone(),
                    None => self.v()?.clone(),
                };
                let h = v_to_h(self.dim, &v)?;
                // the given generators may be redundant; regenerate them from the facets
                let v = h_to_v(&h)?;
                Ok(Polyhedron {
                    dim: self.dim,
                    h: OnceLock::from(h),
                    v: OnceLock::from(v),
                })
            }
        }
    }

    /// Both representations, each irredundant.
    pub fn minimized(&self) -> Result<Polyhedron> {
        self.convert(Repr::H)
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        Ok(self.h()?.is_satisfied_by(x))
    }

    pub fn is_empty(&self) -> Result<bool> {
        if let Some(v) = self.v.get() {
            return Ok(v.points.is_empty());
        }
        let h = self.h()?;
        if h.inequalities.is_empty() && h.equalities.is_empty() {
            return Ok(false);
        }
        Ok(exactlp::feasible_point(h)?.is_none())
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.is_empty()? {
            Err(Error::EmptyOperand)
        } else {
            Ok(())
        }
    }

    /// Some point of the set, if any.
    pub fn any_point(&self) -> Result<Option<QVec>> {
        if let Some(v) = self.v.get() {
            return Ok(v.points.first().cloned());
        }
        exactlp::feasible_point(self.h()?)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        Polyhedron::from_h(self.h()?.intersect(other.h()?)?)
    }

    /// `{x + y : x in self, y in other}`. Sums of polyhedra are closed.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim(self.dim, other.dim)?;
        self.require_nonempty()?;
        other.require_nonempty()?;
        let a = self.v()?;
        let b = other.v()?;
        let mut points = Vec::with_capacity(a.points.len() * b.points.len());
        for p in &a.points {
            for q in &b.points {
                points.push(add(p, q));
            }
        }
        let v = VRep {
            points,
            rays: a.rays.iter().chain(&b.rays).cloned().collect(),
            lineality: a.lineality.iter().chain(&b.lineality).cloned().collect(),
        };
        Polyhedron::from_v(self.dim, v.canonical())
    }

    pub fn recession_cone(&self) -> Result<Polyhedron> {
        self.require_nonempty()?;
        if let Some(v) = self.v.get() {
            return Polyhedron::cone(self.dim, v.rays.clone(), v.lineality.clone());
        }
        let h = self.h()?;
        let homog = |c: &Constraint| Constraint {
            row: c.row.clone(),
            rhs: Rational::zero(),
        };
        Polyhedron::from_h(HRep {
            dim: self.dim,
            inequalities: h.inequalities.iter().map(homog).collect(),
            equalities: h.equalities.iter().map(homog).collect(),
        })
    }

    /// Negative polar `{y : <y, x> <= 0 for all x in self}`.
    pub fn polar(&self) -> Result<Polyhedron> {
        self.require_nonempty()?;
        let v = self.v()?;
        let mut h = HRep::new(self.dim);
        for g in v.points.iter().chain(&v.rays) {
            if !is_zero(g) {
                h.push_ineq(g.clone(), Rational::zero());
            }
        }
        for l in &v.lineality {
            h.push_eq(l.clone(), Rational::zero());
        }
        Polyhedron::from_h(h)
    }

    /// Closure of the convex cone generated by the set.
    pub fn closed_conic_hull(&self) -> Result<Polyhedron> {
        self.require_nonempty()?;
        let v = self.v()?;
        let rays = v
            .points
            .iter()
            .chain(&v.rays)
            .filter(|g| !is_zero(g))
            .cloned()
            .collect();
        Polyhedron::cone(self.dim, rays, v.lineality.clone())
    }

    /// Image under the coordinate projection onto `keep` (in the given order).
    pub fn project(&self, keep: &[usize]) -> Result<Polyhedron> {
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: bad + 1,
            });
        }
        self.require_nonempty()?;
        let v = self.v()?;
        let pick = |x: &QVec| -> QVec { keep.iter().map(|&k| x[k].clone()).collect() };
        let out = VRep {
            points: v.points.iter().map(pick).collect(),
            rays: v.rays.iter().map(pick).collect(),
            lineality: v.lineality.iter().map(pick).collect(),
        };
        Polyhedron::from_v(keep.len(), out.canonical())
    }

    /// `self x Q`: appends one free coordinate.
    pub fn lift_line(&self) -> Result<Polyhedron> {
        let d = self.dim + 1;
        let ext = |x: &QVec| {
            let mut x = x.clone();
            x.push(Rational::zero());
            x
        };
        let v = self.v()?;
        let mut lineality: Vec<QVec> = v.lineality.iter().map(ext).collect();
        if !v.points.is_empty() {
            lineality.push(crate::rational::unit(d, self.dim));
        }
        Polyhedron::from_v(
            d,
            VRep {
                points: v.points.iter().map(ext).collect(),
                rays: v.rays.iter().map(ext).collect(),
                lineality,
            },
        )
    }

    fn generators_within(&self, other: &Polyhedron) -> Result<bool> {
        let v = self.v()?;
        let h = other.h()?;
        Ok(v.points.iter().all(|p| h.is_satisfied_by(p))
            && v.rays.iter().all(|r| h.recedes_along(r))
            && v.lineality.iter().all(|l| h.is_invariant_along(l)))
    }

    pub fn is_subset_of(&self, other: &Polyhedron) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty()? {
            return Ok(true);
        }
        if other.is_empty()? {
            return Ok(false);
        }
        self.generators_within(other)
    }

    /// Set equality.
    pub fn equals(&self, other: &Polyhedron) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// True when the set contains the full line through the origin along `dir`.
    pub fn contains_line(&self, dir: &[Rational]) -> Result<bool> {
        check_dim(self.dim, dir.len())?;
        if self.is_empty()? {
            return Ok(false);
        }
        let h = self.h()?;
        Ok(h.recedes_along(dir) && h.recedes_along(&neg(dir)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ivec, ratio};

    fn interval(lo: i64, hi: i64) -> Polyhedron {
        let mut h = HRep::new(1);
        h.push_ineq(ivec(&[1]), int(hi));
        h.push_ineq(ivec(&[-1]), int(-lo));
        Polyhedron::from_h(h).unwrap()
    }

    fn quadrant() -> Polyhedron {
        let mut h = HRep::new(2);
        h.push_ineq(ivec(&[-1, 0]), int(0));
        h.push_ineq(ivec(&[0, -1]), int(0));
        Polyhedron::from_h(h).unwrap()
    }

    fn example1_a() -> Polyhedron {
        Polyhedron::from_v(
            2,
            VRep {
                points: vec![ivec(&[0, 1])],
                rays: vec![ivec(&[1, 1])],
                lineality: vec![],
            },
        )
        .unwrap()
    }

    #[test]
    fn convert_quadrant() {
        let v = quadrant().convert(Repr::V).unwrap();
        let v = v.v().unwrap();
        assert_eq!(v.points, vec![ivec(&[0, 0])]);
        assert_eq!(v.rays, vec![ivec(&[0, 1]), ivec(&[1, 0])]);
        assert!(v.lineality.is_empty());
    }

    #[test]
    fn convert_interval_and_empty() {
        let v = interval(-1, 1).convert(Repr::V).unwrap();
        assert_eq!(v.v().unwrap().points, vec![ivec(&[-1]), ivec(&[1])]);
        let mut h = HRep::new(1);
        h.push_ineq(ivec(&[1]), int(-1));
        h.push_ineq(ivec(&[-1]), int(-1));
        let e = Polyhedron::from_h(h).unwrap().convert(Repr::V).unwrap();
        assert!(e.v().unwrap().points.is_empty());
        assert!(e.is_empty().unwrap());
    }

    #[test]
    fn contains_cases() {
        let p = interval(0, 1);
        assert!(p.contains(&[ratio(1, 2)]).unwrap());
        assert!(!p.contains(&[ratio(3, 2)]).unwrap());
        assert!(!Polyhedron::empty(1).contains(&[int(0)]).unwrap());
        assert_eq!(
            p.contains(&ivec(&[0, 0])),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn minkowski_examples() {
        let s = interval(0, 1).minkowski_sum(&interval(0, 1)).unwrap();
        assert!(s.equals(&interval(0, 2)).unwrap());
        let p = quadrant();
        assert!(Polyhedron::point(ivec(&[0, 0])).minkowski_sum(&p).unwrap().equals(&p).unwrap());
        let r1 = Polyhedron::cone(2, vec![ivec(&[1, 0])], vec![]).unwrap();
        let r2 = Polyhedron::cone(2, vec![ivec(&[0, 1])], vec![]).unwrap();
        assert!(r1.minkowski_sum(&r2).unwrap().equals(&p).unwrap());
        assert_eq!(Polyhedron::empty(2).minkowski_sum(&p).unwrap_err(), Error::EmptyOperand);
    }

    #[test]
    fn recession_examples() {
        let r = interval(-1, 1).recession_cone().unwrap();
        assert!(r.equals(&Polyhedron::point(ivec(&[0]))).unwrap());
        assert!(quadrant().recession_cone().unwrap().equals(&quadrant()).unwrap());
        let ray = Polyhedron::cone(2, vec![ivec(&[1, 1])], vec![]).unwrap();
        assert!(example1_a().recession_cone().unwrap().equals(&ray).unwrap());
        // same through the H-representation
        let a_h = Polyhedron::from_h(example1_a().h().unwrap().clone()).unwrap();
        assert!(a_h.recession_cone().unwrap().equals(&ray).unwrap());
    }

    #[test]
    fn polar_examples() {
        let mut h = HRep::new(2);
        h.push_ineq(ivec(&[1, 0]), int(0));
        h.push_ineq(ivec(&[0, 1]), int(0));
        let neg_quadrant = Polyhedron::from_h(h).unwrap();
        assert!(quadrant().polar().unwrap().equals(&neg_quadrant).unwrap());
        let origin = Polyhedron::point(ivec(&[0, 0]));
        assert!(origin.polar().unwrap().equals(&Polyhedron::universe(2)).unwrap());
        let ray = Polyhedron::cone(2, vec![ivec(&[1, 1])], vec![]).unwrap();
        let mut h = HRep::new(2);
        h.push_ineq(ivec(&[1, 1]), int(0));
        assert!(ray.polar().unwrap().equals(&Polyhedron::from_h(h).unwrap()).unwrap());
    }

    #[test]
    fn conic_hull_examples() {
        // {1} x R+
        let mut h = HRep::new(2);
        h.push_eq(ivec(&[1, 0]), int(1));
        h.push_ineq(ivec(&[0, -1]), int(0));
        let p = Polyhedron::from_h(h).unwrap();
        assert!(p.closed_conic_hull().unwrap().equals(&quadrant()).unwrap());
        assert!(quadrant().closed_conic_hull().unwrap().equals(&quadrant()).unwrap());
    }

    #[test]
    fn project_examples() {
        let mut h = HRep::new(3);
        h.push_ineq(ivec(&[1, 1, 0]), int(0));
        h.push_ineq(ivec(&[0, 1, -1]), int(0));
        let k = Polyhedron::from_h(h).unwrap();
        let mut expect = HRep::new(2);
        expect.push_ineq(ivec(&[1, 1]), int(0));
        let got = k.project(&[0, 1]).unwrap();
        assert!(got.equals(&Polyhedron::from_h(expect).unwrap()).unwrap());

        let seg = Polyhedron::from_v(
            2,
            VRep {
                points: vec![ivec(&[0, 0]), ivec(&[1, 1])],
                ..VRep::default()
            },
        )
        .unwrap();
        assert!(seg.project(&[0]).unwrap().equals(&interval(0, 1)).unwrap());
        let o = Polyhedron::point(ivec(&[0, 0, 0]));
        assert!(o.project(&[2]).unwrap().equals(&Polyhedron::point(ivec(&[0]))).unwrap());
    }

    #[test]
    fn equality_examples() {
        let v = Polyhedron::cone(2, vec![ivec(&[1, 0]), ivec(&[0, 1])], vec![]).unwrap();
        assert!(quadrant().equals(&v).unwrap());
        assert!(!interval(0, 1).equals(&interval(0, 2)).unwrap());
    }

    #[test]
    fn h_from_v_is_irredundant() {
        let p = Polyhedron::from_v(
            2,
            VRep {
                points: vec![ivec(&[0, 0]), ivec(&[2, 0]), ivec(&[0, 2]), ivec(&[1, 1]), ivec(&[1, 0])],
                ..VRep::default()
            },
        )
        .unwrap();
        let h = p.convert(Repr::H).unwrap();
        assert_eq!(h.h().unwrap().inequalities.len(), 3);
        assert!(h.h().unwrap().redundant_inequalities().unwrap().is_empty());
        assert_eq!(h.v().unwrap().points.len(), 3);
    }

    #[test]
    fn lineality_and_lift() {
        let mut h = HRep::new(2);
        h.push_ineq(ivec(&[1, 1]), int(1));
        let p = Polyhedron::from_h(h).unwrap();
        let v = p.v().unwrap();
        assert_eq!(v.lineality.len(), 1);
        assert_eq!(v.rays.len(), 1);
        assert!(p.contains_line(&ivec(&[1, -1])).unwrap());
        let lifted = p.lift_line().unwrap();
        assert!(lifted.contains(&ivec(&[0, 0, -100])).unwrap());
        assert!(!lifted.contains(&ivec(&[1, 1, 0])).unwrap());
    }
}
