//! A minimal commutative-ring abstraction so one recursion implementation can
//! run over exact rationals, polynomials in the energy, `f64` and MPFR floats.

use num_traits::{ToPrimitive, Zero};
use rug::Float;

use crate::rational::Q;

pub trait Ring: Clone + Send + Sync + std::fmt::Debug {
    /// Additive identity in the same "context" (precision, variable) as `self`.
    fn zero_like(&self) -> Self;
    fn from_q_like(&self, q: &Q) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
    fn is_exact_zero(&self) -> bool;

    fn one_like(&self) -> Self {
        self.from_q_like(&Q::from_integer(1.into()))
    }
    fn neg(&self) -> Self {
        self.zero_like().sub(self)
    }
}

impl Ring for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn from_q_like(&self, q: &Q) -> Self {
        crate::rational::q_f64(q)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, q: &Q) -> Self {
        self * q.to_f64().unwrap_or(f64::NAN)
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Ring for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn from_q_like(&self, q: &Q) -> Self {
        q.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Ring for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn from_q_like(&self, q: &Q) -> Self {
        crate::mp::q_to_float(q, self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn scale(&self, q: &Q) -> Self {
        Float::with_val(self.prec(), self * crate::mp::q_to_rug(q))
    }
    fn is_exact_zero(&self) -> bool {
        Float::is_zero(self)
    }
}
