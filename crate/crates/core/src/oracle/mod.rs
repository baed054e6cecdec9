//! Brute-force cross-checks that only evaluate functions pointwise.
//!
//! Samples are exact rationals drawn from seeded per-point streams, so a cloud is
//! reproducible from its seed no matter how the work is split across threads.

pub mod gen;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::convexfn::{ExtendedValue, PolyhedralFunction};
use crate::error::{check_dim, Error, Result};
use crate::farkas::ConvexSystem;
use crate::ratgeom::{Polyhedron, VRep};
use crate::rational::{add, combination, dot, scale, QVec, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    FeasibleRegion,
    Domain,
    BoxGrid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleCloud {
    pub seed: u64,
    pub provenance: Provenance,
    pub points: Vec<QVec>,
    /// Membership of each point in the sampled set, by direct evaluation.
    pub inside: Vec<bool>,
    /// Recession directions used for the ray steps.
    pub rays: Vec<QVec>,
}

/// Seed of stream `index` derived from a master seed.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, index))
}

/// Random point of `conv(points) + cone(rays) + span(lineality)`; ray steps are `2^k`, `k <= 10`.
fn point_of(v: &VRep, rng: &mut ChaCha8Rng) -> QVec {
    let mut terms: Vec<(Rational, &[Rational])> = Vec::new();
    let weights: Vec<u32> = v.points.iter().map(|_| rng.gen_range(0..=8)).collect();
    let total: u32 = weights.iter().sum();
    if total == 0 {
        terms.push((Rational::one(), &v.points[rng.gen_range(0..v.points.len())]));
    } else {
        for (p, w) in v.points.iter().zip(&weights) {
            if *w > 0 {
                terms.push((Rational::new((*w).into(), total.into()), p));
            }
        }
    }
    for r in &v.rays {
        if rng.gen_bool(0.5) {
            terms.push((Rational::from_integer((1u64 << rng.gen_range(0..=10u32)).into()), r));
        }
    }
    for l in &v.lineality {
        if rng.gen_bool(0.5) {
            let mut step = Rational::from_integer((1u64 << rng.gen_range(0..=10u32)).into());
            if rng.gen_bool(0.5) {
                step = -step;
            }
            terms.push((step, l));
        }
    }
    combination(v.points[0].len(), &terms)
}

fn cloud_from(
    v: &VRep,
    count: usize,
    seed: u64,
    provenance: Provenance,
    test: impl Fn(&QVec) -> Result<bool> + Sync,
) -> Result<SampleCloud> {
    let points: Vec<QVec> = (0..count as u64)
        .into_par_iter()
        .map(|i| point_of(v, &mut stream_rng(seed, i)))
        .collect();
    let inside = points.par_iter().map(&test).collect::<Result<Vec<bool>>>()?;
    let mut rays = v.rays.clone();
    for l in &v.lineality {
        rays.push(l.clone());
        rays.push(crate::rational::neg(l));
    }
    Ok(SampleCloud {
        seed,
        provenance,
        points,
        inside,
        rays,
    })
}

/// Random points of `A`, each re-checked against the constraints directly.
pub fn sample_feasible(sigma: &ConvexSystem, count: usize, seed: u64) -> Result<SampleCloud> {
    let a = sigma.a()?;
    let v = a.v()?;
    if v.points.is_empty() {
        return Err(Error::InconsistentSystem);
    }
    let cloud = cloud_from(v, count, seed, Provenance::FeasibleRegion, |x| sigma.is_feasible(x))?;
    assert!(cloud.inside.iter().all(|&b| b), "sampled point violates the system");
    Ok(cloud)
}

/// Random points of `dom f`.
pub fn sample_domain(f: &PolyhedralFunction, count: usize, seed: u64) -> Result<SampleCloud> {
    let dom = f.domain()?;
    let cloud = cloud_from(dom.v()?, count, seed, Provenance::Domain, |x| {
        Ok(f.evaluate(x)?.is_finite())
    })?;
    assert!(cloud.inside.iter().all(|&b| b), "sampled point outside the domain");
    Ok(cloud)
}

/// Random rationals in `[lo, hi]^dim` with denominators up to 4, tagged by membership in `set`.
pub fn sample_box(dim: usize, lo: i64, hi: i64, count: usize, seed: u64, set: Option<&Polyhedron>) -> Result<SampleCloud> {
    if let Some(s) = set {
        check_dim(dim, s.dim())?;
    }
    let points: Vec<QVec> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            (0..dim)
                .map(|_| {
                    let den: i64 = rng.gen_range(1..=4);
                    let num = rng.gen_range(lo * den..=hi * den);
                    Rational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect();
    let inside = match set {
        Some(s) => points.iter().map(|x| s.contains(x)).collect::<Result<Vec<_>>>()?,
        None => vec![true; points.len()],
    };
    Ok(SampleCloud {
        seed,
        provenance: Provenance::BoxGrid,
        points,
        inside,
        rays: Vec::new(),
    })
}

/// Every point of the grid `{lo, lo + 1/den, ..., hi}^dim`.
pub fn box_grid(dim: usize, lo: i64, hi: i64, den: i64) -> SampleCloud {
    let axis: Vec<Rational> = (lo * den..=hi * den).map(|k| Rational::new(k.into(), den.into())).collect();
    let mut points: Vec<QVec> = vec![Vec::new()];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(a.clone());
                    q
                })
            })
            .collect();
    }
    let inside = vec![true; points.len()];
    SampleCloud {
        seed: 0,
        provenance: Provenance::BoxGrid,
        points,
        inside,
        rays: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    NoViolationFound,
    Violation(QVec),
}

/// Looks for a sample `x in A` with `f(x) - <x*, x> < s`; the first one in cloud order is reported.
pub fn oracle_consequence(
    f: &PolyhedralFunction,
    x_star: &[Rational],
    s: &Rational,
    sigma: &ConvexSystem,
    cloud: &SampleCloud,
) -> Result<OracleVerdict> {
    check_dim(sigma.n(), x_star.len())?;
    let violates = |x: &QVec| -> Result<bool> {
        if !sigma.is_feasible(x)? {
            return Ok(false);
        }
        Ok(match f.evaluate(x)? {
            ExtendedValue::Finite(v) => v - dot(x_star, x) < *s,
            ExtendedValue::PlusInfinity => false,
        })
    };
    let hit = cloud
        .points
        .par_iter()
        .map(|x| violates(x).map(|b| b.then(|| x.clone())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(match hit {
        Some(x) => OracleVerdict::Violation(x),
        None => OracleVerdict::NoViolationFound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateEstimate {
    pub y: QVec,
    /// `max <y, x> - f(x)` over the probes in `dom f`.
    pub value: Option<Rational>,
    /// Values keep growing far out along a probe ray.
    pub unbounded: bool,
}

/// Brute-force lower estimates of `f*` on the dual grid.
pub fn oracle_conjugate(f: &PolyhedralFunction, grid: &SampleCloud, probe: &SampleCloud) -> Result<Vec<ConjugateEstimate>> {
    let mut finite_probes: Vec<(QVec, Rational)> = Vec::new();
    for x in &probe.points {
        if let ExtendedValue::Finite(v) = f.evaluate(x)? {
            finite_probes.push((x.clone(), v));
        }
    }
    let far = Rational::from_integer((1u64 << 10).into());
    let far2 = &far + &far;
    grid.points
        .par_iter()
        .map(|y| {
            let g = |x: &QVec, fx: &Rational| dot(y, x) - fx;
            let value = finite_probes.iter().map(|(x, fx)| g(x, fx)).max();
            let mut unbounded = false;
            'outer: for (x, _) in finite_probes.iter().take(4) {
                for d in &probe.rays {
                    let z1 = add(x, &scale(&far, d));
                    let z2 = add(x, &scale(&far2, d));
                    if let (ExtendedValue::Finite(f1), ExtendedValue::Finite(f2)) = (f.evaluate(&z1)?, f.evaluate(&z2)?) {
                        if (g(&z2, &f2) - g(&z1, &f1)).is_positive() {
                            unbounded = true;
                            break 'outer;
                        }
                    }
                }
            }
            Ok(ConjugateEstimate {
                y: y.clone(),
                value,
                unbounded,
            })
        })
        .collect()
}

/// `true` when the estimate is consistent with the exact conjugate value:
/// never above it, and flagged unbounded only where the conjugate is `+inf`.
pub fn estimate_consistent(est: &ConjugateEstimate, exact: &ExtendedValue) -> bool {
    match exact {
        ExtendedValue::PlusInfinity => true,
        ExtendedValue::Finite(v) => !est.unbounded && est.value.as_ref().is_none_or(|e| e <= v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example1_objective, example1_system, half_line, negation};
    use crate::rational::{int, ivec, ratio};

    #[test]
    fn feasible_samples_of_example1_lie_on_the_ray() {
        let cloud = sample_feasible(&example1_system(), 5, 7).unwrap();
        assert_eq!(cloud.points.len(), 5);
        for p in &cloud.points {
            assert_eq!(&p[1] - &p[0], int(1));
            assert!(!p[0].is_negative());
        }
        assert_eq!(cloud, sample_feasible(&example1_system(), 5, 7).unwrap());
    }

    #[test]
    fn box_and_inconsistent() {
        let square = crate::ratgeom::Polyhedron::from_v(
            2,
            VRep {
                points: vec![ivec(&[0, 0]), ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[1, 1])],
                ..VRep::default()
            },
        )
        .unwrap();
        let sys = ConvexSystem::with_functions(2, Some(square), vec![]).unwrap();
        let cloud = sample_feasible(&sys, 20, 1).unwrap();
        for p in &cloud.points {
            assert!(p.iter().all(|c| !c.is_negative() && *c <= Rational::one()));
        }
        assert_eq!(
            sample_feasible(&crate::catalog::infeasible_pair(), 3, 0).unwrap_err(),
            Error::InconsistentSystem
        );
    }

    #[test]
    fn consequence_oracle_examples() {
        let sys = half_line();
        let f = negation();
        let mut cloud = sample_feasible(&sys, 200, 3).unwrap();
        assert_eq!(
            oracle_consequence(&f, &ivec(&[0]), &int(-1), &sys, &cloud).unwrap(),
            OracleVerdict::NoViolationFound
        );
        cloud.points.insert(0, ivec(&[1]));
        assert_eq!(
            oracle_consequence(&f, &ivec(&[0]), &ratio(-1, 2), &sys, &cloud).unwrap(),
            OracleVerdict::Violation(ivec(&[1]))
        );
        let s = example1_system();
        let cloud = sample_feasible(&s, 100, 9).unwrap();
        assert_eq!(
            oracle_consequence(&example1_objective(), &ivec(&[0, 0]), &int(1000), &s, &cloud).unwrap(),
            OracleVerdict::NoViolationFound
        );
    }

    #[test]
    fn conjugate_oracle_examples() {
        let abs = PolyhedralFunction::max_affine(vec![(ivec(&[1]), int(0)), (ivec(&[-1]), int(0))]).unwrap();
        let probe = SampleCloud {
            seed: 0,
            provenance: Provenance::Domain,
            points: vec![ivec(&[-1]), ivec(&[0]), ivec(&[1])],
            inside: vec![true; 3],
            rays: vec![ivec(&[1]), ivec(&[-1])],
        };
        let grid = SampleCloud {
            points: vec![vec![ratio(1, 2)], ivec(&[2])],
            inside: vec![true; 2],
            ..probe.clone()
        };
        let est = oracle_conjugate(&abs, &grid, &probe).unwrap();
        assert_eq!(est[0].value, Some(int(0)));
        assert!(!est[0].unbounded);
        assert!(est[1].unbounded);

        let f = example1_objective();
        let probe = sample_domain(&f, 20, 4).unwrap();
        let grid = SampleCloud {
            points: vec![ivec(&[-1, 0])],
            inside: vec![true],
            ..probe.clone()
        };
        let est = oracle_conjugate(&f, &grid, &probe).unwrap();
        assert_eq!(est[0].value, Some(int(0)));
        let exact = f.conjugate().unwrap().evaluate(&ivec(&[-1, 0])).unwrap();
        assert_eq!(exact, ExtendedValue::Finite(int(0)));
        assert!(estimate_consistent(&est[0], &exact));
    }
}
