//! Random small instances with integer data, for the randomized suites and the self-test.

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::convexfn::{ExtendedValue, PolyhedralFunction};
use crate::error::Result;
use crate::farkas::ConvexSystem;
use crate::ratgeom::{HRep, Polyhedron, VRep};
use crate::rational::{add, dot, int, is_zero, ratio, scale, zeros, QVec, Rational};

pub fn int_vec<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> QVec {
    (0..n).map(|_| int(rng.gen_range(lo..=hi))).collect()
}

fn nonzero_vec<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> QVec {
    loop {
        let v = int_vec(rng, n, lo, hi);
        if !is_zero(&v) {
            return v;
        }
    }
}

/// Random polyhedron with `rows` inequalities (and sometimes an equality) containing `through`.
pub fn polyhedron_through<R: Rng>(rng: &mut R, through: &[Rational], rows: usize) -> Polyhedron {
    let n = through.len();
    let mut h = HRep::new(n);
    for _ in 0..rows {
        let a = nonzero_vec(rng, n, -3, 3);
        let slack = int(rng.gen_range(0..=2));
        let rhs = dot(&a, through) + slack;
        h.push_ineq(a, rhs);
    }
    if n > 1 && rng.gen_bool(0.15) {
        let a = nonzero_vec(rng, n, -2, 2);
        let rhs = dot(&a, through);
        h.push_eq(a, rhs);
    }
    Polyhedron::from_h(h).expect("consistent dimensions")
}

/// `max_k (a_k . x + b_k)` restricted to `domain`; epigraph built directly.
pub fn piecewise(pieces: &[(QVec, Rational)], domain: Option<&Polyhedron>) -> Result<PolyhedralFunction> {
    let n = pieces[0].0.len();
    let mut h = match domain {
        Some(d) => d.h()?.embed(n + 1, 0),
        None => HRep::new(n + 1),
    };
    for (a, b) in pieces {
        let mut row = a.clone();
        row.push(-Rational::one());
        h.push_ineq(row, -b);
    }
    PolyhedralFunction::from_epigraph(Polyhedron::from_h(h)?)
}

fn random_pieces<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<(QVec, Rational)> {
    (0..count)
        .map(|_| (int_vec(rng, n, -3, 3), int(rng.gen_range(-3..=3))))
        .collect()
}

/// A random proper function: max-affine, indicator, or max-affine on a polyhedron.
pub fn random_function<R: Rng>(rng: &mut R, n: usize) -> PolyhedralFunction {
    let anchor = int_vec(rng, n, -2, 2);
    random_function_through(rng, n, &anchor)
}

/// A random proper function finite at `anchor`.
pub fn random_function_through<R: Rng>(rng: &mut R, n: usize, anchor: &[Rational]) -> PolyhedralFunction {
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(1..=3);
            piecewise(&random_pieces(rng, n, k), None).expect("max-affine is proper")
        }
        1 => {
            let rows = rng.gen_range(1..=n + 1);
            let d = polyhedron_through(rng, anchor, rows);
            PolyhedralFunction::indicator(&d).expect("nonempty set")
        }
        _ => {
            let rows = rng.gen_range(1..=n);
            let d = polyhedron_through(rng, anchor, rows);
            let k = rng.gen_range(1..=2);
            piecewise(&random_pieces(rng, n, k), Some(&d)).expect("nonempty domain")
        }
    }
}

/// `f - c`, by shifting every piece.
fn shifted(pieces: &[(QVec, Rational)], c: &Rational) -> Vec<(QVec, Rational)> {
    pieces.iter().map(|(a, b)| (a.clone(), b - c)).collect()
}

/// A random function with `f(x0) <= 0`.
pub fn random_constraint_at<R: Rng>(rng: &mut R, x0: &[Rational]) -> PolyhedralFunction {
    let n = x0.len();
    let domain = if rng.gen_bool(0.4) {
        let rows = rng.gen_range(1..=n);
        Some(polyhedron_through(rng, x0, rows))
    } else {
        None
    };
    if domain.is_some() && rng.gen_bool(0.3) {
        return PolyhedralFunction::indicator(domain.as_ref().unwrap()).expect("nonempty set");
    }
    let k = rng.gen_range(1..=2);
    let pieces = random_pieces(rng, n, k);
    let top = pieces.iter().map(|(a, b)| dot(a, x0) + b).max().expect("pieces");
    let slack = int(rng.gen_range(0..=2));
    piecewise(&shifted(&pieces, &(top + slack)), domain.as_ref()).expect("finite at x0")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Consistent,
    Inconsistent,
}

/// A random system with `m` constraints in `Q^n` of the requested kind.
pub fn random_system<R: Rng>(rng: &mut R, n: usize, m: usize, kind: SystemKind) -> ConvexSystem {
    let x0 = int_vec(rng, n, -2, 2);
    let c = if rng.gen_bool(0.5) {
        None
    } else {
        let rows = rng.gen_range(1..=n + 1);
        Some(polyhedron_through(rng, &x0, rows))
    };
    let mut fs: Vec<PolyhedralFunction> = (0..m).map(|_| random_constraint_at(rng, &x0)).collect();
    if kind == SystemKind::Inconsistent {
        let a = nonzero_vec(rng, n, -3, 3);
        let gap = int(rng.gen_range(1..=3));
        match rng.gen_range(0..3) {
            0 => {
                // a.x + gap <= 0 and -a.x <= 0 cannot both hold
                fs.push(piecewise(&[(a.clone(), gap)], None).unwrap());
                fs.push(piecewise(&[(a.iter().map(|x| -x).collect(), int(0))], None).unwrap());
            }
            1 => {
                // an indicator far on one side and a half-space on the other
                let mut h = HRep::new(n);
                h.push_ineq(a.iter().map(|x| -x).collect(), -(dot(&a, &x0) + &gap));
                fs.push(PolyhedralFunction::indicator(&Polyhedron::from_h(h).unwrap()).unwrap());
                fs.push(piecewise(&[(a.clone(), -dot(&a, &x0))], None).unwrap());
            }
            _ => {
                // a strictly positive function
                let pieces = vec![(a.clone(), gap.clone()), (a.iter().map(|x| -x).collect(), gap)];
                fs.push(piecewise(&pieces, None).unwrap());
            }
        }
        fs.shuffle(rng);
    }
    ConvexSystem::with_functions(n, c, fs).expect("well-formed system")
}

/// An Example-1 style pair: `A` is a ray and `dom f` a parallel ray that never meets it.
pub fn parallel_rays<R: Rng>(rng: &mut R, n: usize) -> (ConvexSystem, PolyhedralFunction) {
    assert!(n >= 2, "needs two independent directions");
    let x0 = int_vec(rng, n, -2, 2);
    let d = nonzero_vec(rng, n, -2, 2);
    let e = loop {
        let e = nonzero_vec(rng, n, -2, 2);
        // e must not be parallel to d
        let parallel = (0..n).all(|i| (0..n).all(|j| &e[i] * &d[j] == &e[j] * &d[i]));
        if !parallel {
            break e;
        }
    };
    let ray = |p: QVec| {
        Polyhedron::from_v(
            n,
            VRep {
                points: vec![p],
                rays: vec![d.clone()],
                lineality: vec![],
            },
        )
        .unwrap()
    };
    let f1 = PolyhedralFunction::indicator(&ray(x0.clone())).unwrap();
    let sigma = ConvexSystem::with_functions(n, None, vec![f1]).unwrap();
    let a = int_vec(rng, n, -2, 2);
    let f = piecewise(&[(a, int(rng.gen_range(-2..=2)))], Some(&ray(add(&x0, &e)))).unwrap();
    (sigma, f)
}

/// An objective whose domain is disjoint from the bounded set `C = [-2, 2]^n`.
pub fn far_objective<R: Rng>(rng: &mut R, n: usize) -> PolyhedralFunction {
    let c = nonzero_vec(rng, n, -2, 2);
    let bound: Rational = c.iter().map(|x| x.abs() * int(2)).sum();
    let mut h = HRep::new(n);
    h.push_ineq(c.iter().map(|x| -x).collect(), -(bound + Rational::one()));
    let dom = Polyhedron::from_h(h).unwrap();
    piecewise(&random_pieces(rng, n, 1), Some(&dom)).unwrap()
}

pub fn cube(n: usize, r: i64) -> Polyhedron {
    let mut h = HRep::new(n);
    for i in 0..n {
        let mut row = zeros(n);
        row[i] = Rational::one();
        h.push_ineq(row.clone(), int(r));
        row[i] = -Rational::one();
        h.push_ineq(row, int(r));
    }
    Polyhedron::from_h(h).unwrap()
}

/// Random point of a nonempty polyhedron: a convex combination of vertices plus small ray steps.
pub fn point_in<R: Rng>(rng: &mut R, p: &Polyhedron) -> Result<QVec> {
    let v = p.v()?;
    let mut x = zeros(p.dim());
    let weights: Vec<i64> = v.points.iter().map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    for (q, w) in v.points.iter().zip(&weights) {
        x = add(&x, &scale(&ratio(*w, total), q));
    }
    for r in &v.rays {
        x = add(&x, &scale(&int(rng.gen_range(0..=2)), r));
    }
    for l in &v.lineality {
        x = add(&x, &scale(&int(rng.gen_range(-2..=2)), l));
    }
    Ok(x)
}

/// A query built backwards from multipliers, so `(x*, -s)` lies in `epi f* + K` by construction.
#[derive(Debug, Clone)]
pub struct ForwardInstance {
    pub sigma: ConvexSystem,
    pub f: PolyhedralFunction,
    pub x_star: QVec,
    pub s: Rational,
    pub lambda: Vec<(usize, Rational)>,
}

fn conj_value(f: &PolyhedralFunction, y: &[Rational]) -> Result<Rational> {
    match f.conjugate()?.evaluate(y)? {
        ExtendedValue::Finite(v) => Ok(v),
        ExtendedValue::PlusInfinity => unreachable!("sampled from the conjugate domain"),
    }
}

pub fn forward_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> Result<ForwardInstance> {
    let sigma = random_system(rng, n, m, SystemKind::Consistent);
    let k = rng.gen_range(1..=3);
    let f = piecewise(&random_pieces(rng, n, k), None)?;
    let u_star = point_in(rng, &f.conjugate()?.domain()?)?;
    let dc = sigma.indicator_c()?;
    let v_star = point_in(rng, &dc.conjugate()?.domain()?)?;
    let mut x_star = add(&u_star, &v_star);
    let mut total = conj_value(&f, &u_star)? + conj_value(dc, &v_star)?;
    let mut lambda = Vec::new();
    for j in 0..m {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let lam = ratio(rng.gen_range(1..=6), rng.gen_range(1..=3));
        let fj = sigma.function(j);
        let uj = point_in(rng, &fj.conjugate()?.domain()?)?;
        total += &lam * conj_value(fj, &uj)?;
        x_star = add(&x_star, &scale(&lam, &uj));
        lambda.push((j, lam));
    }
    let slack = ratio(rng.gen_range(0..=2), 2);
    let s = -(total + slack);
    Ok(ForwardInstance {
        sigma,
        f,
        x_star,
        s,
        lambda,
    })
}

/// Consistent system, real-valued objective and a random tilt; the minimum may or may not be attained.
pub fn perturbed_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> (ConvexSystem, PolyhedralFunction, QVec) {
    let sigma = random_system(rng, n, m, SystemKind::Consistent);
    let k = rng.gen_range(1..=3);
    let f = if rng.gen_bool(0.7) {
        piecewise(&random_pieces(rng, n, k), None).unwrap()
    } else {
        // bounded domain keeps more minima attained
        let x0 = crate::exactlp::feasible_point(sigma.a_h().unwrap()).unwrap().unwrap();
        let mut h = cube(n, 3).h().unwrap().clone();
        for c in h.inequalities.iter_mut() {
            c.rhs += dot(&c.row, &x0);
        }
        piecewise(&random_pieces(rng, n, k), Some(&Polyhedron::from_h(h).unwrap())).unwrap()
    };
    let x_star = int_vec(rng, n, -2, 2);
    (sigma, f, x_star)
}

/// Test helper: does `t` leave the value non-negative?
pub fn nonnegative(v: &Rational) -> bool {
    !v.is_negative() || v.is_zero()
}
