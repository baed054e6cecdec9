//! Scalars and vectors over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A vector of rationals; its length is the ambient dimension.
pub type QVec = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ivec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    sum_products(a.iter().zip(b))
}

/// `Σ x y`, kept as an unreduced fraction and normalized once at the end.
fn sum_products<'a>(terms: impl Iterator<Item = (&'a Rational, &'a Rational)>) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in terms {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let tn = x.numer() * y.numer();
        let td = x.denom() * y.denom();
        if td == den {
            num += tn;
        } else if td.is_one() {
            num += tn * &den;
        } else {
            num = num * &td + tn * &den;
            den *= td;
        }
    }
    Rational::new(num, den)
}

/// `Σ c_k v_k` over vectors of length `n`.
pub fn combination(n: usize, terms: &[(Rational, &[Rational])]) -> QVec {
    (0..n)
        .map(|j| sum_products(terms.iter().map(|(c, v)| (c, &v[j]))))
        .collect()
}

pub fn checked_dot(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    check_dim(a.len(), b.len())?;
    Ok(dot(a, b))
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rational, a: &[Rational]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Rational]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Positive multiplier turning `a` into a primitive integer vector.
fn primitive_factor(a: &[Rational]) -> Option<Rational> {
    let mut den = BigInt::one();
    for x in a {
        den = den.lcm(x.denom());
    }
    let mut g = BigInt::zero();
    for x in a {
        let v = x.numer() * (&den / x.denom());
        g = g.gcd(&v);
    }
    if g.is_zero() {
        None
    } else {
        Some(Rational::new(den, g))
    }
}

/// Scales by a positive factor to integer entries with gcd 1. Direction is preserved.
pub fn primitive(a: &[Rational]) -> QVec {
    match primitive_factor(a) {
        Some(f) => scale(&f, a),
        None => a.to_vec(),
    }
}

/// Primitive integer form with the first nonzero entry positive (for lines).
pub fn canonical_line(a: &[Rational]) -> QVec {
    let v = primitive(a);
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&v),
        _ => v,
    }
}

/// Renders `(a, b, c)` with rationals in `p/q` form.
pub fn fmt_vec(a: &[Rational]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
