//! Double description method over the integers.
//!
//! Computes a minimal generating system (extreme rays plus a lineality basis)
//! of the cone `{y : A y <= 0, E y = 0}`. Rays are kept as primitive integer
//! vectors; adjacency uses the combinatorial test on tight-constraint sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::limits;

pub(crate) type IVec = Vec<BigInt>;

#[derive(Debug, Clone, Default)]
pub(crate) struct ConeGenerators {
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
}

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn full_below(bits: usize, k: usize) -> Self {
        let mut s = BitSet::new(bits);
        for i in 0..k {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: IVec,
    tight: BitSet,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// `alpha * x + beta * y`, made primitive.
fn combine(alpha: &BigInt, x: &[BigInt], beta: &BigInt, y: &[BigInt]) -> IVec {
    let mut v: IVec = x.iter().zip(y).map(|(a, b)| alpha * a + beta * b).collect();
    make_primitive(&mut v);
    v
}

pub(crate) fn cone_generators(dim: usize, ineqs: &[IVec], eqs: &[IVec]) -> Result<ConeGenerators> {
    let cap = limits::max_generators();
    let mut lineality: Vec<IVec> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::one();
            e
        })
        .collect();

    // Equalities only shrink the lineality space; rays do not exist yet.
    for a in eqs {
        if let Some(pos) = lineality.iter().position(|l| !idot(a, l).is_zero()) {
            let l = lineality.remove(pos);
            let al = idot(a, &l);
            for other in lineality.iter_mut() {
                let c = idot(a, other);
                if !c.is_zero() {
                    *other = combine(&al, other, &(-c), &l);
                }
            }
        }
    }

    let total = ineqs.len();
    let mut rays: Vec<Ray> = Vec::new();
    for (k, a) in ineqs.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !idot(a, l).is_zero()) {
            let mut l = lineality.remove(pos);
            let mut al = idot(a, &l);
            if al.is_positive() {
                for x in l.iter_mut() {
                    *x = -&*x;
                }
                al = -al;
            }
            for other in lineality.iter_mut() {
                let c = idot(a, other);
                if !c.is_zero() {
                    *other = combine(&al, other, &(-c), &l);
                }
            }
            let neg_al = -&al;
            for r in rays.iter_mut() {
                let c = idot(a, &r.v);
                if !c.is_zero() {
                    r.v = combine(&neg_al, &r.v, &c, &l);
                }
                r.tight.insert(k);
            }
            rays.push(Ray {
                v: l,
                tight: BitSet::full_below(total, k),
            });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (r, val) in rays.iter().zip(&values) {
            if val.is_negative() {
                next.push(r.clone());
            } else if val.is_zero() {
                let mut r = r.clone();
                r.tight.insert(k);
                next.push(r);
            }
        }
        for (i, p) in rays.iter().enumerate() {
            if !values[i].is_positive() {
                continue;
            }
            for (j, n) in rays.iter().enumerate() {
                if !values[j].is_negative() {
                    continue;
                }
                let common = p.tight.and(&n.tight);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(m, r)| m == i || m == j || !common.is_subset_of(&r.tight));
                if !adjacent {
                    continue;
                }
                let v = combine(&values[i], &n.v, &(-&values[j]), &p.v);
                let mut tight = common;
                tight.insert(k);
                next.push(Ray { v, tight });
                if next.len() > cap {
                    return Err(Error::ResourceLimit {
                        what: "double description generators",
                        limit: cap,
                    });
                }
            }
        }
        rays = next;
        if rays.len() > cap {
            return Err(Error::ResourceLimit {
                what: "double description generators",
                limit: cap,
            });
        }
    }

    Ok(ConeGenerators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> IVec {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_has_coordinate_rays() {
        let g = cone_generators(2, &[iv(&[-1, 0]), iv(&[0, -1])], &[]).unwrap();
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
        assert!(g.lineality.is_empty());
    }

    #[test]
    fn halfspace_keeps_lineality() {
        let g = cone_generators(3, &[iv(&[1, 1, 0])], &[]).unwrap();
        assert_eq!(g.rays.len(), 1);
        assert_eq!(g.lineality.len(), 2);
        assert!(idot(&iv(&[1, 1, 0]), &g.rays[0]).is_negative());
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over the square [-1,1]^2 at height 1
        let ineqs = vec![
            iv(&[1, 0, -1]),
            iv(&[-1, 0, -1]),
            iv(&[0, 1, -1]),
            iv(&[0, -1, -1]),
        ];
        let g = cone_generators(3, &ineqs, &[]).unwrap();
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[2], BigInt::from(1));
        }
    }

    #[test]
    fn equality_restricts_space() {
        let g = cone_generators(2, &[iv(&[-1, 0])], &[iv(&[1, -1])]).unwrap();
        assert_eq!(g.rays, vec![iv(&[1, 1])]);
        assert!(g.lineality.is_empty());
    }
}
