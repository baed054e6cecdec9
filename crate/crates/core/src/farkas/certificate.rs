use num_traits::Signed;

use super::{ConvexSystem, Decomposition};
use crate::convexfn::{ExtendedValue, PolyhedralFunction};
use crate::error::{Error, Result};
use crate::rational::{add, scale, QVec, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplier {
    pub index: usize,
    pub name: String,
    pub lambda: Rational,
    pub u: QVec,
    /// `f_j*(u_j)`
    pub conj_value: Rational,
}

/// Finite multipliers witnessing `f(x) - <x*, x> >= s` on the solutions of σ:
/// `x* = u* + v* + Σ λ_j u_j` and `f*(u*) + δ_C*(v*) + Σ λ_j f_j*(u_j) <= -s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub x_star: QVec,
    pub s: Rational,
    pub u_star: QVec,
    /// `f*(u*)`
    pub f_conj: Rational,
    pub v_star: QVec,
    /// `δ_C*(v*)`
    pub c_support: Rational,
    /// The index set `J` with its multipliers; may be empty.
    pub multipliers: Vec<Multiplier>,
}

fn finite(v: ExtendedValue) -> Result<Rational> {
    match v {
        ExtendedValue::Finite(r) => Ok(r),
        ExtendedValue::PlusInfinity => Err(Error::PointOutsideDomain),
    }
}

impl FarkasCertificate {
    /// Reads the certificate off an exact decomposition of `(x*, -s)`.
    pub fn from_decomposition(
        d: &Decomposition,
        f: &PolyhedralFunction,
        sigma: &ConvexSystem,
        x_star: &[Rational],
        s: &Rational,
    ) -> Result<FarkasCertificate> {
        let n = sigma.n();
        let obj = d
            .objective_part
            .as_ref()
            .ok_or(Error::PremiseViolated("decomposition lacks the objective part"))?;
        let u_star = obj[..n].to_vec();
        let v_star = d.base_part[..n].to_vec();
        let f_conj = finite(f.conjugate()?.evaluate(&u_star)?)?;
        let c_support = finite(sigma.indicator_c()?.conjugate()?.evaluate(&v_star)?)?;
        let mut multipliers = Vec::with_capacity(d.terms.len());
        for t in &d.terms {
            let z = t
                .point()
                .ok_or(Error::PremiseViolated("zero multiplier in an exact decomposition"))?;
            let u = z[..n].to_vec();
            let conj_value = finite(sigma.function(t.index).conjugate()?.evaluate(&u)?)?;
            multipliers.push(Multiplier {
                index: t.index,
                name: sigma.constraints()[t.index].name.clone(),
                lambda: t.lambda.clone(),
                u,
                conj_value,
            });
        }
        let cert = FarkasCertificate {
            x_star: x_star.to_vec(),
            s: s.clone(),
            u_star,
            f_conj,
            v_star,
            c_support,
            multipliers,
        };
        if !cert.verify(f, sigma)? {
            return Err(Error::PremiseViolated("decomposition does not certify the query"));
        }
        Ok(cert)
    }

    pub fn j(&self) -> Vec<usize> {
        self.multipliers.iter().map(|m| m.index).collect()
    }

    /// Re-evaluates all conjugate values and checks both certificate relations exactly.
    pub fn verify(&self, f: &PolyhedralFunction, sigma: &ConvexSystem) -> Result<bool> {
        let n = sigma.n();
        if self.x_star.len() != n || self.u_star.len() != n || self.v_star.len() != n {
            return Ok(false);
        }
        let fc = f.conjugate()?.evaluate(&self.u_star)?;
        let cs = sigma.indicator_c()?.conjugate()?.evaluate(&self.v_star)?;
        if fc != ExtendedValue::Finite(self.f_conj.clone()) || cs != ExtendedValue::Finite(self.c_support.clone()) {
            return Ok(false);
        }
        let mut sum_x = add(&self.u_star, &self.v_star);
        let mut sum_v = &self.f_conj + &self.c_support;
        let mut seen = vec![false; sigma.len()];
        for m in &self.multipliers {
            if m.index >= sigma.len() || seen[m.index] || !m.lambda.is_positive() || m.u.len() != n {
                return Ok(false);
            }
            seen[m.index] = true;
            let v = sigma.function(m.index).conjugate()?.evaluate(&m.u)?;
            if v != ExtendedValue::Finite(m.conj_value.clone()) {
                return Ok(false);
            }
            sum_x = add(&sum_x, &scale(&m.lambda, &m.u));
            sum_v += &m.lambda * &m.conj_value;
        }
        Ok(sum_x == self.x_star && sum_v <= -&self.s)
    }

    /// `f(x) - <x*, x> + Σ λ_j f_j(x)`, which the certificate bounds below by `s` on `C`.
    pub fn lagrangian(&self, f: &PolyhedralFunction, sigma: &ConvexSystem, x: &[Rational]) -> Result<ExtendedValue> {
        let mut acc = f.evaluate(x)?;
        acc = acc.plus(&ExtendedValue::Finite(-crate::rational::dot(&self.x_star, x)));
        for m in &self.multipliers {
            let fj = sigma.function(m.index).evaluate(x)?;
            acc = acc.plus(&match fj {
                ExtendedValue::Finite(v) => ExtendedValue::Finite(&m.lambda * v),
                ExtendedValue::PlusInfinity => ExtendedValue::PlusInfinity,
            });
        }
        Ok(acc)
    }
}
