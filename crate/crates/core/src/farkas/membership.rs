//! Membership of `q in Q^(n+1)` in `P + epi δ_C* + Σ_i (cone pieces)`, where `P` is
//! `epi f*` (or another polyhedron, or nothing). The closure version homogenizes
//! each piece; the exact version also needs every used multiplier strictly positive.

use num_traits::{One, Signed, Zero};

use super::support::{largest_positive_support, ActiveRegion};
use super::ConvexSystem;
use crate::convexfn::PolyhedralFunction;
use crate::error::{check_dim, Result};
use crate::exactlp::feasible_point;
use crate::ratgeom::{Constraint, HRep, Polyhedron};
use crate::rational::{add, is_zero, scale, zeros, QVec, Rational};

/// One term `w_i` of a cone decomposition. With `lambda > 0`, `w / lambda` lies in
/// `epi f_i*`; with `lambda = 0`, `w` lies in its recession cone (closure only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTerm {
    pub index: usize,
    pub lambda: Rational,
    pub w: QVec,
}

impl ConeTerm {
    /// `w / lambda`, the point of `epi f_i*` used with weight `lambda`.
    pub fn point(&self) -> Option<QVec> {
        if self.lambda.is_positive() {
            Some(scale(&self.lambda.recip(), &self.w))
        } else {
            None
        }
    }
}

/// `q = objective_part + base_part + Σ w_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub objective_part: Option<QVec>,
    pub base_part: QVec,
    pub terms: Vec<ConeTerm>,
}

impl Decomposition {
    /// True when every term carries a positive multiplier.
    pub fn is_exact(&self) -> bool {
        self.terms.iter().all(|t| t.lambda.is_positive())
    }

    /// Re-checks every membership and the sum with exact arithmetic.
    pub fn verify(&self, q: &[Rational], extra: Option<&Polyhedron>, sigma: &ConvexSystem) -> Result<bool> {
        let n1 = sigma.n() + 1;
        check_dim(n1, q.len())?;
        let k = sigma.characteristic_cone()?;
        let mut total = self.base_part.clone();
        if !k.base.contains(&self.base_part)? {
            return Ok(false);
        }
        match (&self.objective_part, extra) {
            (Some(p), Some(e)) => {
                if !e.contains(p)? {
                    return Ok(false);
                }
                total = add(&total, p);
            }
            (None, None) => {}
            _ => return Ok(false),
        }
        for t in &self.terms {
            if t.index >= sigma.len() || t.lambda.is_negative() {
                return Ok(false);
            }
            let piece = &k.pieces[t.index];
            let ok = match t.point() {
                Some(z) => piece.contains(&z)?,
                None => piece.h()?.recedes_along(&t.w),
            };
            if !ok {
                return Ok(false);
            }
            total = add(&total, &t.w);
        }
        Ok(total == q)
    }
}

struct Layout {
    n1: usize,
    extra_off: Option<usize>,
    base_off: usize,
    /// `(constraint index, offset of w, coordinate of lambda)`
    terms: Vec<(usize, usize, usize)>,
}

fn homogenized(h: &HRep) -> (Vec<Constraint>, Vec<Constraint>) {
    let lift = |c: &Constraint| {
        let mut row = c.row.clone();
        row.push(-c.rhs.clone());
        Constraint {
            row,
            rhs: Rational::zero(),
        }
    };
    (
        h.inequalities.iter().map(lift).collect(),
        h.equalities.iter().map(lift).collect(),
    )
}

fn place(total: usize, off: usize, row: &[Rational]) -> QVec {
    let mut r = zeros(total);
    r[off..off + row.len()].clone_from_slice(row);
    r
}

fn build_region(
    q: &[Rational],
    extra: Option<&HRep>,
    sigma: &ConvexSystem,
    active: &[usize],
) -> Result<(HRep, Layout)> {
    let n1 = sigma.n() + 1;
    let k = sigma.characteristic_cone()?;
    let mut off = 0;
    let extra_off = extra.map(|_| {
        off += n1;
        0
    });
    let base_off = off;
    off += n1;
    let mut terms = Vec::with_capacity(active.len());
    for &i in active {
        terms.push((i, off, off + n1));
        off += n1 + 1;
    }
    let total = off;

    let mut region = HRep::new(total);
    let mut embed = |h: &HRep, at: usize| {
        for c in &h.inequalities {
            region.push_ineq(place(total, at, &c.row), c.rhs.clone());
        }
        for c in &h.equalities {
            region.push_eq(place(total, at, &c.row), c.rhs.clone());
        }
    };
    if let (Some(h), Some(at)) = (extra, extra_off) {
        embed(h, at);
    }
    embed(k.base.h()?, base_off);
    for &(i, w_off, _) in &terms {
        let (ineqs, eqs) = homogenized(k.pieces[i].h()?);
        for c in ineqs {
            region.push_ineq(place(total, w_off, &c.row), c.rhs);
        }
        for c in eqs {
            region.push_eq(place(total, w_off, &c.row), c.rhs);
        }
    }
    for &(_, _, lam) in &terms {
        let mut row = zeros(total);
        row[lam] = -Rational::one();
        region.push_ineq(row, Rational::zero());
    }
    for (j, qj) in q.iter().enumerate() {
        let mut row = zeros(total);
        if let Some(at) = extra_off {
            row[at + j] = Rational::one();
        }
        row[base_off + j] = Rational::one();
        for &(_, w_off, _) in &terms {
            row[w_off + j] = Rational::one();
        }
        region.push_eq(row, qj.clone());
    }
    Ok((
        region,
        Layout {
            n1,
            extra_off,
            base_off,
            terms,
        },
    ))
}

fn read(point: &[Rational], layout: &Layout) -> Decomposition {
    let n1 = layout.n1;
    let terms = layout
        .terms
        .iter()
        .map(|&(i, w_off, lam)| ConeTerm {
            index: i,
            lambda: point[lam].clone(),
            w: point[w_off..w_off + n1].to_vec(),
        })
        .filter(|t| t.lambda.is_positive() || !is_zero(&t.w))
        .collect();
    Decomposition {
        objective_part: layout.extra_off.map(|o| point[o..o + n1].to_vec()),
        base_part: point[layout.base_off..layout.base_off + n1].to_vec(),
        terms,
    }
}

fn closure_with(q: &[Rational], extra: Option<&HRep>, sigma: &ConvexSystem) -> Result<Option<Decomposition>> {
    check_dim(sigma.n() + 1, q.len())?;
    let all: Vec<usize> = (0..sigma.len()).collect();
    let (region, layout) = build_region(q, extra, sigma, &all)?;
    Ok(feasible_point(&region)?.map(|p| read(&p, &layout)))
}

pub(crate) fn exact_with(q: &[Rational], extra: Option<&HRep>, sigma: &ConvexSystem) -> Result<Option<Decomposition>> {
    check_dim(sigma.n() + 1, q.len())?;
    let all: Vec<usize> = (0..sigma.len()).collect();
    let found = largest_positive_support(&all, |active| {
        let (region, layout) = build_region(q, extra, sigma, active)?;
        Ok(ActiveRegion {
            region,
            multipliers: layout.terms.iter().map(|t| t.2).collect(),
        })
    })?;
    let Some((active, point)) = found else {
        return Ok(None);
    };
    let (_, layout) = build_region(q, extra, sigma, &active)?;
    let d = read(&point, &layout);
    debug_assert!(d.is_exact());
    Ok(Some(d))
}

/// A decomposition of `q` over `epi f* + epi δ_C* + Σ cl cone(epi f_i*)`, a closed
/// set equal to `cl(epi f* + K)`. Without `f` this is the closure of `K`.
pub fn closure_decomposition(
    q: &[Rational],
    f: Option<&PolyhedralFunction>,
    sigma: &ConvexSystem,
) -> Result<Option<Decomposition>> {
    match f {
        Some(f) => closure_with(q, Some(f.conjugate()?.epigraph_h()?), sigma),
        None => closure_with(q, None, sigma),
    }
}

/// `q ∈ cl(epi f* + K)`.
pub fn member_closure(q: &[Rational], f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<bool> {
    Ok(closure_decomposition(q, Some(f), sigma)?.is_some())
}

/// `q ∈ epi f* + K`, with the decomposition when it exists.
pub fn member_exact(q: &[Rational], f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<Option<Decomposition>> {
    exact_with(q, Some(f.conjugate()?.epigraph_h()?), sigma)
}

/// `q ∈ K`.
pub fn member_cone(q: &[Rational], sigma: &ConvexSystem) -> Result<Option<Decomposition>> {
    exact_with(q, None, sigma)
}
