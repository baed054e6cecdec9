//! Small fixed instances used by tests, the self-test and the benchmarks.

use crate::convexfn::PolyhedralFunction;
use crate::farkas::ConvexSystem;
use crate::ratgeom::{HRep, Polyhedron};
use crate::rational::{int, ivec};

fn set(dim: usize, ineqs: &[(&[i64], i64)], eqs: &[(&[i64], i64)]) -> Polyhedron {
    let mut h = HRep::new(dim);
    for (r, b) in ineqs {
        h.push_ineq(ivec(r), int(*b));
    }
    for (r, b) in eqs {
        h.push_eq(ivec(r), int(*b));
    }
    Polyhedron::from_h(h).expect("well-formed fixture")
}

/// `f(u, v) = -u` on `{u >= 0, v = u}`, `+inf` elsewhere.
pub fn example1_objective() -> PolyhedralFunction {
    let s = set(2, &[(&[-1, 0], 0)], &[(&[1, -1], 0)]);
    PolyhedralFunction::affine_on(ivec(&[-1, 0]), int(0), &s).expect("proper")
}

/// `C = Q^2`, `f_1` the indicator of `{u >= 0, v = u + 1}`.
pub fn example1_system() -> ConvexSystem {
    let f1 = PolyhedralFunction::indicator(&set(2, &[(&[-1, 0], 0)], &[(&[-1, 1], 1)])).expect("proper");
    ConvexSystem::with_functions(2, None, vec![f1]).expect("well-formed")
}

/// `C = Q^2`, `f_1(x) = x_1` on `{x_2 = 0}`: consistent, but `K` is not closed.
pub fn sigma_nc() -> ConvexSystem {
    let f1 = PolyhedralFunction::affine_on(ivec(&[1, 0]), int(0), &set(2, &[], &[(&[0, 1], 0)])).expect("proper");
    ConvexSystem::with_functions(2, None, vec![f1]).expect("well-formed")
}

/// `{x + 1 <= 0, -x + 1 <= 0}` over `Q`.
pub fn infeasible_pair() -> ConvexSystem {
    let f1 = PolyhedralFunction::affine(ivec(&[1]), int(1)).expect("proper");
    let f2 = PolyhedralFunction::affine(ivec(&[-1]), int(1)).expect("proper");
    ConvexSystem::with_functions(1, None, vec![f1, f2]).expect("well-formed")
}

/// `{x - 1 <= 0}` over `Q`.
pub fn half_line() -> ConvexSystem {
    let f1 = PolyhedralFunction::affine(ivec(&[1]), int(-1)).expect("proper");
    ConvexSystem::with_functions(1, None, vec![f1]).expect("well-formed")
}

/// `x -> -x` on `Q`.
pub fn negation() -> PolyhedralFunction {
    PolyhedralFunction::affine(ivec(&[-1]), int(0)).expect("proper")
}

/// `min |x_1 - 2|` subject to `x_1 - 1 <= 0` over `Q^2`.
pub fn kkt_example() -> (ConvexSystem, PolyhedralFunction) {
    let f = PolyhedralFunction::max_affine(vec![(ivec(&[1, 0]), int(-2)), (ivec(&[-1, 0]), int(2))]).expect("proper");
    let f1 = PolyhedralFunction::affine(ivec(&[1, 0]), int(-1)).expect("proper");
    (ConvexSystem::with_functions(2, None, vec![f1]).expect("well-formed"), f)
}
