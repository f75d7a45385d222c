//! Univariate polynomials in the energy with exact rational coefficients.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::rational::{q_str, serde_q, Q};
use crate::ring::Ring;

/// Which energy variable a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EVar {
    E,
    Ebar,
}

impl fmt::Display for EVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EVar::E => "E",
            EVar::Ebar => "Ebar",
        })
    }
}

/// Polynomial in the energy; `coeffs[i]` multiplies var^i. Trailing zeros are
/// always stripped, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPolynomial {
    pub var: EVar,
    #[serde(with = "serde_q::vec")]
    coeffs: Vec<Q>,
}

impl EPolynomial {
    pub fn new(var: EVar, mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EPolynomial { var, coeffs }
    }

    pub fn zero(var: EVar) -> Self {
        EPolynomial { var, coeffs: vec![] }
    }

    pub fn constant(var: EVar, c: Q) -> Self {
        Self::new(var, vec![c])
    }

    pub fn one(var: EVar) -> Self {
        Self::constant(var, Q::one())
    }

    /// The variable itself.
    pub fn x(var: EVar) -> Self {
        Self::new(var, vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn with_var(mut self, var: EVar) -> Self {
        self.var = var;
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.var, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.var, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.var);
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(self.var, c)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiply by the variable.
    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Q::zero()];
        c.extend(self.coeffs.iter().cloned());
        Self::new(self.var, c)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + crate::rational::q_f64(c);
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += crate::mp::q_to_rug(c);
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(self.var), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Self::new(self.var, quo), Self::new(self.var, r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn divides(&self, o: &Self) -> bool {
        o.div_rem(self).1.is_zero()
    }

    /// `Some(k)` with `o = k·self` exactly, if the two are proportional.
    pub fn proportionality(&self, o: &Self) -> Option<Q> {
        if self.is_zero() || o.is_zero() || self.degree() != o.degree() {
            return None;
        }
        let k = o.leading() / self.leading();
        (self.scale(&k) == *o).then_some(k)
    }

    /// Square-free decomposition (Yun): returns (fᵢ, i) with self ∝ Π fᵢ^i.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    /// Substitute var → k·var (coefficient i scaled by kⁱ).
    pub fn rescale_var(&self, k: &Q) -> Self {
        let mut p = Q::one();
        let mut c = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            c.push(a * &p);
            p *= k;
        }
        Self::new(self.var, c)
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(q_str).collect()
    }
}

impl fmt::Display for EPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "{}", self.var)?,
                _ => write!(f, "{}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}

impl Ring for EPolynomial {
    fn zero_like(&self) -> Self {
        Self::zero(self.var)
    }
    fn from_q_like(&self, q: &Q) -> Self {
        Self::constant(self.var, q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        EPolynomial::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        EPolynomial::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        EPolynomial::mul(self, o)
    }
    fn scale(&self, q: &Q) -> Self {
        EPolynomial::scale(self, q)
    }
    fn is_exact_zero(&self) -> bool {
        EPolynomial::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> EPolynomial {
        EPolynomial::new(EVar::E, c.iter().map(|&v| qi(v)).collect())
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[-24, 0, 1]);
        assert_eq!(a.to_string(), "E^2 - 24");
        assert_eq!(a.degree(), Some(2));
        assert_eq!(p(&[0, 0, 0]).degree(), None);
        let (qq, r) = p(&[0, -256, 0, 1]).div_rem(&p(&[0, 1]));
        assert_eq!(qq, p(&[-256, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(a.scale(&q(-1, 2)).proportionality(&a), Some(qi(-2)));
    }

    #[test]
    fn yun_decomposition() {
        // (E-1)^2 (E+2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        let d = f.squarefree_decomposition();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], (p(&[2, 1]), 1));
        assert_eq!(d[1], (p(&[-1, 1]), 2));
        assert_eq!(f.squarefree_part(), p(&[-2, 1, 1]));
    }

    #[test]
    fn serde_uses_rational_strings() {
        let a = EPolynomial::new(EVar::Ebar, vec![q(-81, 2), qi(0), qi(1)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"var":"Ebar","coeffs":["-81/2","0","1"]}"#);
        let b: EPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn division_identity(a in prop::collection::vec(-9i64..9, 0..7),
                             b in prop::collection::vec(-9i64..9, 1..5)) {
            let a = p(&a);
            let b = p(&b);
            prop_assume!(!b.is_zero());
            let (qq, r) = a.div_rem(&b);
            prop_assert_eq!(qq.mul(&b).add(&r), a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
        }
    }
}
