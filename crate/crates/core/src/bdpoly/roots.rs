//! Real-root isolation by Sturm sequences over exact rationals, with exact
//! bisection refinement. Dyadic roots are hit exactly because the search
//! starts from a power-of-two bound and only ever halves intervals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use super::poly::EPolynomial;
use crate::mp::serde_float;
use crate::rational::{serde_q, Q};

/// One real root: an isolating interval (lo, hi] (or the exact point lo = hi),
/// its refined value and its multiplicity in the source polynomial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealRoot {
    #[serde(with = "serde_q::vec")]
    pub interval: Vec<Q>,
    #[serde(with = "serde_float")]
    pub value: Float,
    pub multiplicity: usize,
    /// True when the root is rational and was located exactly.
    pub exact: bool,
}

impl RealRoot {
    pub fn lo(&self) -> &Q {
        &self.interval[0]
    }
    pub fn hi(&self) -> &Q {
        &self.interval[1]
    }
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
    /// The exact rational value when the root is rational and was hit.
    pub fn exact_value(&self) -> Option<&Q> {
        self.exact.then(|| self.lo())
    }
}

/// All real roots of a polynomial, ascending.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RealRootSet {
    pub roots: Vec<RealRoot>,
}

impl RealRootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
    /// Number of roots counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
    pub fn values_f64(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.to_f64()).collect()
    }
}

fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

struct Sturm {
    seq: Vec<EPolynomial>,
}

impl Sturm {
    fn new(p: &EPolynomial) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        Sturm { seq }
    }

    fn variations(&self, x: &Q) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for p in &self.seq {
            let s = sign(&p.eval_q(x));
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Number of distinct roots in (a, b] for a not a root.
    fn count(&self, a: &Q, b: &Q) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Smallest power of two strictly exceeding every root modulus (Cauchy bound).
fn root_bound(p: &EPolynomial) -> Q {
    let lead = p.leading().abs();
    let mut m = Q::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = c.abs() / &lead;
        if r > m {
            m = r;
        }
    }
    let bound = m + Q::one();
    let mut b = Q::one();
    while b <= bound {
        b *= Q::from_integer(BigInt::from(2));
    }
    b
}

fn half(a: &Q, b: &Q) -> Q {
    (a + b) / Q::from_integer(BigInt::from(2))
}

/// Isolating intervals (a, b] of the distinct real roots of a square-free `s`.
/// Rational roots met at a bisection point are returned exactly as (r, r) and
/// deflated out before the search restarts.
fn isolate_squarefree(s: &EPolynomial) -> Vec<(EPolynomial, Q, Q)> {
    let mut s = s.clone();
    let mut out = Vec::new();
    'restart: loop {
        if s.degree().unwrap_or(0) == 0 {
            break;
        }
        let sturm = Sturm::new(&s);
        let b = root_bound(&s);
        let mut stack = vec![(-b.clone(), b)];
        let mut found = Vec::new();
        while let Some((lo, hi)) = stack.pop() {
            match sturm.count(&lo, &hi) {
                0 => {}
                1 => found.push((lo, hi)),
                _ => {
                    let mid = half(&lo, &hi);
                    if s.eval_q(&mid).is_zero() {
                        let lin = EPolynomial::new(s.var, vec![-mid.clone(), Q::one()]);
                        s = s.div_rem(&lin).0;
                        out.push((lin, mid.clone(), mid));
                        continue 'restart;
                    }
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.extend(found.into_iter().map(|(lo, hi)| (s.clone(), lo, hi)));
        break;
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    out
}

/// Refine an isolating interval (lo, hi] of a simple root of `s` until its
/// width is below 2^{-bits}; returns the final interval, collapsed to a point
/// when the root is hit exactly.
fn refine(s: &EPolynomial, mut lo: Q, mut hi: Q, bits: u32) -> (Q, Q, bool) {
    if lo == hi || s.eval_q(&hi).is_zero() {
        return (hi.clone(), hi, true);
    }
    let width = Q::new(BigInt::one(), BigInt::one() << bits as usize);
    let mut s_lo = sign(&s.eval_q(&lo));
    while &hi - &lo > width {
        let mid = half(&lo, &hi);
        let sm = sign(&s.eval_q(&mid));
        if sm == 0 {
            return (mid.clone(), mid, true);
        }
        if sm == s_lo {
            lo = mid;
            s_lo = sm;
        } else {
            hi = mid;
        }
    }
    (lo, hi, false)
}

/// Complete set of real roots of `p`, each refined to `prec` bits (absolute
/// width 2^{-prec} of the final interval), with multiplicities.
pub fn isolate_real_roots(p: &EPolynomial, prec: u32) -> RealRootSet {
    isolate_real_roots_with(p, prec, crate::par::parallel_available())
}

pub fn isolate_real_roots_with(p: &EPolynomial, prec: u32, parallel: bool) -> RealRootSet {
    if p.degree().unwrap_or(0) == 0 {
        return RealRootSet::default();
    }
    let mut jobs: Vec<(EPolynomial, usize, Q, Q)> = Vec::new();
    for (f, mult) in p.squarefree_decomposition() {
        for (g, lo, hi) in isolate_squarefree(&f) {
            jobs.push((g, mult, lo, hi));
        }
    }
    let bits = prec + 8;
    let mut roots: Vec<RealRoot> = crate::par::map(&jobs, parallel, |(f, mult, lo, hi)| {
        let (lo, hi, exact) = refine(f, lo.clone(), hi.clone(), bits);
        let value = if exact {
            crate::mp::q_to_float(&lo, prec.max(53))
        } else {
            crate::mp::q_to_float(&half(&lo, &hi), prec.max(53))
        };
        RealRoot {
            interval: vec![lo, hi],
            value,
            multiplicity: *mult,
            exact,
        }
    });
    roots.sort_by(|a, b| a.lo().cmp(b.lo()));
    // roots of different square-free factors are distinct, but their
    // isolating intervals are disjoint only after enough refinement
    for i in 1..roots.len() {
        debug_assert!(roots[i - 1].hi() <= roots[i].lo() || roots[i - 1].exact || roots[i].exact);
    }
    RealRootSet { roots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdpoly::EVar;
    use crate::rational::qi;

    fn p(c: &[i64]) -> EPolynomial {
        EPolynomial::new(EVar::E, c.iter().map(|&v| qi(v)).collect())
    }

    #[test]
    fn sqrt24() {
        let r = isolate_real_roots(&p(&[-24, 0, 1]), 128);
        assert_eq!(r.len(), 2);
        let want = 24f64.sqrt();
        assert!((r.roots[0].to_f64() + want).abs() < 1e-15);
        assert!((r.roots[1].to_f64() - want).abs() < 1e-15);
        assert!(!r.roots[0].exact);
    }

    #[test]
    fn exact_dyadic_roots() {
        let r = isolate_real_roots(&p(&[0, -256, 0, 1]), 64);
        let vals: Vec<_> = r.roots.iter().map(|x| x.exact_value().cloned()).collect();
        assert_eq!(vals, vec![Some(qi(-16)), Some(qi(0)), Some(qi(16))]);
        let single = isolate_real_roots(&p(&[0, 1]), 64);
        assert_eq!(single.roots[0].exact_value(), Some(&qi(0)));
    }

    #[test]
    fn multiplicities_and_complex_pairs() {
        // E^2 (E^2 + 1): one real double root
        let r = isolate_real_roots(&p(&[0, 0, 1, 0, 1]), 64);
        assert_eq!(r.len(), 1);
        assert_eq!(r.roots[0].multiplicity, 2);
        assert!(isolate_real_roots(&p(&[7]), 64).is_empty());
    }
}
