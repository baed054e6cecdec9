//! Largest active set whose multipliers can all be strictly positive at once.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlp::{feasible_point, sup_positive, Positivity};
use crate::limits;
use crate::ratgeom::HRep;
use crate::rational::{QVec, Rational};

/// A closed region built for an active set, and the coordinate of each active multiplier.
pub(crate) struct ActiveRegion {
    pub region: HRep,
    pub multipliers: Vec<usize>,
}

/// Finds the largest `S ⊆ candidates` such that the region built for `S` has a
/// point with every multiplier of `S` positive, together with such a point.
///
/// Any valid `S'` embeds into the region of every superset, so `S'` survives
/// each shrinking step; the loop stops at the largest valid set or proves none exists.
pub(crate) fn largest_positive_support<F>(candidates: &[usize], build: F) -> Result<Option<(Vec<usize>, QVec)>>
where
    F: Fn(&[usize]) -> Result<ActiveRegion>,
{
    let cap = limits::max_subsets();
    let mut active: Vec<usize> = candidates.to_vec();
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::ResourceLimit {
                what: "active subsets",
                limit: cap,
            });
        }
        let built = build(&active)?;
        if active.is_empty() {
            return Ok(feasible_point(&built.region)?.map(|p| (active, p)));
        }
        let mut keep = Vec::with_capacity(active.len());
        let mut witnesses: Vec<QVec> = Vec::with_capacity(active.len());
        for (k, &coord) in built.multipliers.iter().enumerate() {
            match sup_positive(&built.region, coord) {
                Err(Error::EmptyRegion) => return Ok(None),
                Err(e) => return Err(e),
                Ok(Positivity::StuckAtZero) => {}
                Ok(Positivity::CanBePositive(w)) => {
                    keep.push(active[k]);
                    witnesses.push(w);
                }
            }
        }
        if keep.len() == active.len() {
            // a convex combination keeps every multiplier positive
            let count = Rational::from_integer(witnesses.len().into());
            let dim = built.region.dim;
            let mut avg = vec![Rational::zero(); dim];
            for w in &witnesses {
                for (a, x) in avg.iter_mut().zip(w) {
                    *a += x;
                }
            }
            for a in avg.iter_mut() {
                *a /= &count;
            }
            debug_assert!(built.region.is_satisfied_by(&avg));
            return Ok(Some((active, avg)));
        }
        active = keep;
    }
}
