//! Exact polynomial recursions for the four energy-polynomial families, the
//! obstruction polynomial of the resonant (irregular) sextic series, and
//! real-root isolation of their members.

mod poly;
mod roots;

pub use poly::{EPolynomial, EVar};
pub use roots::{isolate_real_roots, isolate_real_roots_with, RealRoot, RealRootSet};

use num_traits::One;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::params::{alpha_qes, QesFamily};
use crate::rational::{q, qi, Q};

fn qn(n: usize) -> Q {
    qi(n as i64)
}

/// P_0..=P_n of the second-order family
/// P_k = E·P_{k−1} + 16(k−1)(k−j−1)(k+l−1/2)·P_{k−2}, j = −(α+2l+1)/4.
pub fn bd_second_all(alpha: &Q, l: &Q, n: usize) -> Vec<EPolynomial> {
    let j = -(alpha + qi(2) * l + Q::one()) / qi(4);
    let mut out = vec![EPolynomial::one(EVar::E)];
    for k in 1..=n {
        let mut next = out[k - 1].shift();
        if k >= 2 {
            let c = qi(16) * (qn(k) - qi(1)) * (qn(k) - &j - qi(1)) * (qn(k) + l - q(1, 2));
            next = next.add(&out[k - 2].scale(&c));
        }
        out.push(next);
    }
    out
}

/// P_n(E) of the second-order family.
pub fn bd_second(alpha: &Q, l: &Q, n: usize) -> EPolynomial {
    bd_second_all(alpha, l, n).pop().unwrap()
}

/// The J exactly-solvable levels of the sextic at α = α_J: the real roots of
/// P_J, refined to `prec` bits. Fails if fewer than J real roots exist.
pub fn qes_eigenvalues(j: u32, l: &Q, prec: u32) -> Result<RealRootSet> {
    let alpha = alpha_qes(j, l)?;
    let p = bd_second(&alpha, l, j as usize);
    let roots = isolate_real_roots(&p, prec);
    let found = roots.total_multiplicity();
    if found < j as usize {
        return Err(QesError::MissingRoots {
            expected: j as usize,
            found,
        });
    }
    Ok(roots)
}

/// Does P_J divide every P_n for J ≤ n ≤ n_max at α = α_J?
pub fn bd_factorisation_check(j: u32, l: &Q, n_max: usize) -> Result<bool> {
    let alpha = alpha_qes(j, l)?;
    factorisation_holds(&alpha, l, j as usize, n_max)
}

/// Divisibility of P_n by P_j for j ≤ n ≤ n_max at arbitrary (α, l).
pub fn factorisation_holds(alpha: &Q, l: &Q, j: usize, n_max: usize) -> Result<bool> {
    if n_max < j + 1 {
        return Err(QesError::InvalidParameter(format!(
            "n_max must be at least J+1 = {}",
            j + 1
        )));
    }
    let all = bd_second_all(alpha, l, n_max);
    let pj = &all[j];
    Ok(all[j..].iter().all(|p| pj.divides(p)))
}

/// A polynomial in E that is affine in the free symbol Q_J:
/// `constant + symbol · Q_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePoly {
    pub constant: EPolynomial,
    pub symbol: EPolynomial,
}

impl AffinePoly {
    fn known(p: EPolynomial) -> Self {
        AffinePoly {
            symbol: EPolynomial::zero(p.var),
            constant: p,
        }
    }
    fn free() -> Self {
        AffinePoly {
            constant: EPolynomial::zero(EVar::E),
            symbol: EPolynomial::one(EVar::E),
        }
    }
    fn shift(&self) -> Self {
        AffinePoly {
            constant: self.constant.shift(),
            symbol: self.symbol.shift(),
        }
    }
    fn add(&self, o: &Self) -> Self {
        AffinePoly {
            constant: self.constant.add(&o.constant),
            symbol: self.symbol.add(&o.symbol),
        }
    }
    fn scale(&self, k: &Q) -> Self {
        AffinePoly {
            constant: self.constant.scale(k),
            symbol: self.symbol.scale(k),
        }
    }
    /// Does the value depend on the free symbol?
    pub fn depends_on_symbol(&self) -> bool {
        !self.symbol.is_zero()
    }
    /// Substitute a numeric value of the symbol at energy E.
    pub fn eval_float(&self, e: &Float, qj: &Float) -> Float {
        let prec = e.prec();
        Float::with_val(prec, self.constant.eval_float(e) + self.symbol.eval_float(e) * qj)
    }
}

/// The degree-J polynomial whose vanishing allows the resonant series to be
/// continued without a logarithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionPolynomial {
    pub poly: EPolynomial,
    pub j: u32,
    pub family: QesFamily,
}

/// The n-th member of the irregular sextic family
/// (n−J)·Q_n = E·Q_{n−1} + 16(n−1)(n+l−1/2)·Q_{n−2}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IrregularTerm {
    /// n < J: an ordinary polynomial.
    Polynomial { poly: EPolynomial },
    /// n = J: the right-hand side, which must vanish.
    Obstruction { obstruction: ObstructionPolynomial },
    /// n > J: depends affinely on the unspecified Q_J.
    Symbolic { value: AffinePoly },
}

/// Q_0..=Q_n of the irregular family (the member at J is the free symbol).
pub fn bd_irregular_all(j: u32, l: &Q, n: usize) -> Result<Vec<AffinePoly>> {
    if j == 0 {
        return Err(QesError::InvalidParameter("J must be >= 1".into()));
    }
    let jj = j as usize;
    let mut out: Vec<AffinePoly> = vec![AffinePoly::known(EPolynomial::one(EVar::E))];
    for k in 1..=n {
        if k == jj {
            out.push(AffinePoly::free());
            continue;
        }
        let rhs = irregular_rhs(&out, k, l);
        let factor = Q::one() / (qn(k) - qi(j as i64));
        out.push(rhs.scale(&factor));
    }
    Ok(out)
}

fn irregular_rhs(prev: &[AffinePoly], k: usize, l: &Q) -> AffinePoly {
    let mut rhs = prev[k - 1].shift();
    if k >= 2 {
        let c = qi(16) * (qn(k) - qi(1)) * (qn(k) + l - q(1, 2));
        rhs = rhs.add(&prev[k - 2].scale(&c));
    }
    rhs
}

pub fn bd_irregular(j: u32, l: &Q, n: usize) -> Result<IrregularTerm> {
    let all = bd_irregular_all(j, l, n.max(j as usize))?;
    let jj = j as usize;
    Ok(if n < jj {
        IrregularTerm::Polynomial {
            poly: all[n].constant.clone(),
        }
    } else if n == jj {
        IrregularTerm::Obstruction {
            obstruction: irregular_obstruction(j, l)?,
        }
    } else {
        IrregularTerm::Symbolic {
            value: all[n].clone(),
        }
    })
}

/// The obstruction polynomial of the irregular sextic family at level J.
pub fn irregular_obstruction(j: u32, l: &Q) -> Result<ObstructionPolynomial> {
    let all = bd_irregular_all(j, l, j as usize - 1)?;
    let rhs = irregular_rhs(&all, j as usize, l);
    debug_assert!(!rhs.depends_on_symbol());
    Ok(ObstructionPolynomial {
        poly: rhs.constant,
        j,
        family: QesFamily::IrregularSextic,
    })
}

/// Π_{k=0}^{n-1} (p − g0 + g_k) for the third-order and general families.
fn shifted_product(p: &Q, g: &[Q]) -> Q {
    g.iter().map(|gk| p - &g[0] + gk).product()
}

/// P̄_0..=P̄_n with P̄_k = Ē·P̄_{k−1} + Π_k(3(k−1)−g0+g_k)·P̄_{k−2}.
pub fn cheng_third_all(g: &[Q; 3], n: usize) -> Vec<EPolynomial> {
    let mut out = vec![EPolynomial::one(EVar::Ebar)];
    for k in 1..=n {
        let mut next = out[k - 1].shift();
        if k >= 2 {
            let c = shifted_product(&(qi(3) * (qn(k) - qi(1))), g);
            next = next.add(&out[k - 2].scale(&c));
        }
        out.push(next);
    }
    out
}

pub fn cheng_third(g: &[Q; 3], n: usize) -> EPolynomial {
    cheng_third_all(g, n).pop().unwrap()
}

/// The n-th order family
/// P_m = E·P_{m−1} − (−1)^M·Π_{j=1}^{M} Π_k (n(j+m−M−1) − g0 + g_k)·P_{m−1−M},
/// with P_0 = 1 and negative indices read as zero.
pub fn general_family_all(n: u32, m_pow: u32, g: &[Q], m: usize) -> Result<Vec<EPolynomial>> {
    if g.len() != n as usize || n < 2 || m_pow < 1 {
        return Err(QesError::InvalidParameter(format!(
            "general family needs n >= 2, M >= 1 and n exponents (got n={n}, M={m_pow}, {} exponents)",
            g.len()
        )));
    }
    let sum: Q = g.iter().sum();
    if sum != qi((n * (n - 1) / 2) as i64) {
        return Err(QesError::InvalidParameter(format!(
            "exponents must sum to n(n-1)/2, got {sum}"
        )));
    }
    let mm = m_pow as usize;
    let sign = if m_pow.is_multiple_of(2) { -Q::one() } else { Q::one() }; // −(−1)^M
    let mut out = vec![EPolynomial::one(EVar::E)];
    for k in 1..=m {
        let mut next = out[k - 1].shift();
        if k > mm {
            let mut c = sign.clone();
            for jdx in 1..=mm {
                let p = qi(n as i64) * (qn(jdx + k) - qn(mm) - qi(1));
                c *= shifted_product(&p, g);
            }
            next = next.add(&out[k - 1 - mm].scale(&c));
        }
        out.push(next);
    }
    Ok(out)
}

pub fn general_family(n: u32, m_pow: u32, g: &[Q], m: usize) -> Result<EPolynomial> {
    Ok(general_family_all(n, m_pow, g, m)?.pop().unwrap())
}

/// κⁿ·P̄_n(E/κ) evaluated at `prec` bits; equals P_n(E) on the QES locus.
pub fn kappa_scaled_cheng(g: &[Q; 3], n: usize, e: &Float) -> Float {
    let prec = e.prec();
    let kappa = crate::mp::kappa(prec);
    let ebar = Float::with_val(prec, e / &kappa);
    let p = cheng_third(g, n);
    let mut kn = Float::with_val(prec, 1);
    for _ in 0..n {
        kn *= &kappa;
    }
    Float::with_val(prec, p.eval_float(&ebar) * kn)
}
