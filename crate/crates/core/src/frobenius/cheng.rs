//! Cheng's fixed-point construction of the origin solution of the adjoint
//! third-order problem,
//!
//! χ = x^{2−g0} + L[(x³ − Ē)χ],  L(x^p) = x^{p+3} / Π_k (p+1+g_k),
//!
//! its closed form x^{2−g0}·Σ_m (−1)^m P̄_m(Ē) x^{3m} / Π_{j≤m} D_j with
//! D_m = Π_k (3m − g0 + g_k), and the regulated limits on the resonant locus
//! g0 − g1 = 3J.

use num_traits::{One, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use super::{eval_poly_ring, sum_terms, with_cancellation_control};
use crate::bdpoly::{cheng_third_all, EPolynomial};
use crate::error::{QesError, Result};
use crate::mp::{powq, q_to_float};
use crate::rational::{q, q_as_positive_integer, q_str, qi, serde_q, Q};
use crate::ring::Ring;

/// D_m = Π_k (3m − g0 + g_k).
pub fn cheng_denominator(g: &[Q; 3], m: usize) -> Q {
    let p = qi(3 * m as i64);
    g.iter().map(|gk| &p - &g[0] + gk).product()
}

/// D_m with the factor (3m − g0 + g1) removed.
fn reduced_denominator(g: &[Q; 3], m: usize) -> Q {
    let p = qi(3 * m as i64);
    (&p - &g[0] + &g[0]) * (&p - &g[0] + &g[2])
}

fn resonance_error(g: &[Q; 3], m: usize) -> QesError {
    QesError::Resonance {
        power: q_str(&(qi(2) - &g[0] + qi(3 * m as i64))),
    }
}

/// Coefficients (of x^{2−g0+3m}) of a Cheng series.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChengSeries<T> {
    #[serde(with = "serde_q::vec")]
    pub g: Vec<Q>,
    #[serde(with = "serde_q")]
    pub exponent: Q,
    pub coefficients: Vec<T>,
    /// D_1, D_2, … (D_0 is always 1 in this normalisation).
    #[serde(with = "serde_q::vec")]
    pub denominators: Vec<Q>,
    pub truncation: usize,
}

impl<T> ChengSeries<T> {
    fn build(g: &[Q; 3], coefficients: Vec<T>) -> Self {
        let n = coefficients.len();
        ChengSeries {
            g: g.to_vec(),
            exponent: qi(2) - &g[0],
            denominators: (1..n).map(|m| cheng_denominator(g, m)).collect(),
            coefficients,
            truncation: n,
        }
    }
}

/// The n-fold iterate from χ⁽⁰⁾ = x^{2−g0}; coefficients of x^{2−g0+3m} for
/// m = 0..=2n. Errors on a vanishing D_m.
pub fn cheng_iterate<T: Ring>(g: &[Q; 3], ebar: &T, iterations: usize) -> Result<ChengSeries<T>> {
    iterate(g, ebar, iterations, None)
}

/// Regulated iterate on the locus g0 − g1 = 3J: the coefficient of x^{3J}
/// (whose denominator vanishes) is replaced by its finite limit
/// (−1)^J·C / D̂_J, D̂_J being D_J without its vanishing factor. Every iterate
/// that reaches index J carries this value.
pub fn cheng_iterate_regulated<T: Ring>(
    g: &[Q; 3],
    ebar: &T,
    c: &T,
    iterations: usize,
) -> Result<ChengSeries<T>> {
    let j = resonant_level(g)?;
    if iterations < j {
        return Err(QesError::InvalidParameter(format!(
            "the regulated iterate needs at least J = {j} iterations"
        )));
    }
    let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
    let val = c.scale(&(sign / reduced_denominator(g, j)));
    iterate(g, ebar, iterations, Some((j, val)))
}

fn iterate<T: Ring>(
    g: &[Q; 3],
    ebar: &T,
    iterations: usize,
    regulated: Option<(usize, T)>,
) -> Result<ChengSeries<T>> {
    let zero = ebar.zero_like();
    let mut chi = vec![ebar.one_like()];
    for _ in 0..iterations {
        let len = chi.len() + 2;
        let mut next = vec![zero.clone(); len];
        next[0] = ebar.one_like();
        for m in 1..len {
            if let Some((j, v)) = &regulated {
                if m == *j {
                    next[m] = v.clone();
                    continue;
                }
            }
            let mut num = zero.clone();
            if m >= 2 && m - 2 < chi.len() {
                num = num.add(&chi[m - 2]);
            }
            if m - 1 < chi.len() {
                num = num.sub(&ebar.mul(&chi[m - 1]));
            }
            if num.is_exact_zero() {
                continue;
            }
            let d = cheng_denominator(g, m);
            if d.is_zero() {
                return Err(resonance_error(g, m));
            }
            next[m] = num.scale(&(Q::one() / d));
        }
        chi = next;
    }
    Ok(ChengSeries::build(g, chi))
}

/// (−1)^m P̄_m(Ē) / Π_{j≤m} D_j for m = 0..n.
pub fn cheng_closed_form<T: Ring>(g: &[Q; 3], ebar: &T, n: usize) -> Result<ChengSeries<T>> {
    let polys = cheng_third_all(g, n.saturating_sub(1));
    let mut cum = Q::one();
    let mut out = Vec::with_capacity(n);
    for (m, p) in polys.iter().enumerate().take(n) {
        if m > 0 {
            let d = cheng_denominator(g, m);
            if d.is_zero() {
                return Err(resonance_error(g, m));
            }
            cum *= d;
        }
        let sign = if m % 2 == 0 { Q::one() } else { -Q::one() };
        out.push(eval_poly_ring(p, ebar).scale(&(sign / &cum)));
    }
    Ok(ChengSeries::build(g, out))
}

/// The level J with g0 − g1 = 3J, if the triple is on a resonant locus.
fn resonant_level(g: &[Q; 3]) -> Result<usize> {
    q_as_positive_integer(&((&g[0] - &g[1]) / qi(3)))
        .map(|j| j as usize)
        .ok_or_else(|| {
            QesError::InvalidParameter("g0 − g1 is not a positive multiple of 3".into())
        })
}

/// Closed-form coefficients on the resonant locus at a root Ē of P̄_J, with
/// the free finite part C at index J: (−1)^m P̄_m/Π D_j below J, (−1)^J C/D̂_J
/// at J, and the recursion a_m = (a_{m−2} − Ē a_{m−1})/D_m above.
pub fn cheng_regulated_closed_form<T: Ring>(
    g: &[Q; 3],
    ebar: &T,
    c: &T,
    n: usize,
) -> Result<ChengSeries<T>> {
    let j = resonant_level(g)?;
    let below = cheng_closed_form(g, ebar, j.min(n))?;
    let mut a = below.coefficients;
    let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
    for m in a.len()..n {
        let v = if m == j {
            c.scale(&(&sign / reduced_denominator(g, m)))
        } else {
            let mut num = ebar.zero_like();
            if m >= 2 {
                num = num.add(&a[m - 2]);
            }
            num = num.sub(&ebar.mul(&a[m - 1]));
            num.scale(&(Q::one() / cheng_denominator(g, m)))
        };
        a.push(v);
    }
    Ok(ChengSeries::build(g, a))
}

/// The finite limit of P̄_J(Ē)/(Π_{j<J} D_j · ε) with ε = 3J − g0 + g1 → 0,
/// given as the constant C that multiplies the index-J term.
/// For J = 1, Ē = 0 the decaying combination needs
/// C = √6·Γ(2 − g0/2)/Γ(3/2 − g0/2).
pub fn regulated_constant(g0: &Q, prec: u32) -> Result<Float> {
    let a = crate::mp::gamma_q(&(qi(2) - g0 / qi(2)), prec)?;
    let b = crate::mp::gamma_q(&(q(3, 2) - g0 / qi(2)), prec)?;
    Ok(Float::with_val(prec, 6).sqrt() * a / b)
}

fn eval_series(g: &[Q; 3], x: &Float, prec: u32, n_max: usize, coeff: impl Fn(usize, u32) -> Result<Float>) -> Result<Float> {
    let v = with_cancellation_control(prec, |p| {
        let x = Float::with_val(p, x);
        let x3 = Float::with_val(p, x.clone().square() * &x);
        let mut pw = Float::with_val(p, 1);
        sum_terms(p, n_max, |m, p| {
            if m > 0 {
                pw *= &x3;
            }
            Ok(Float::with_val(p, coeff(m, p)? * &pw))
        })
    })?;
    Ok(Float::with_val(prec, v * powq(x, &(qi(2) - &g[0]))))
}

/// χ(x) from the closed-form series, summed until the tail is negligible.
#[allow(clippy::needless_range_loop)]
pub fn cheng_series_eval(g: &[Q; 3], ebar: &Float, x: &Float, n_max: usize) -> Result<Float> {
    let prec = ebar.prec().max(x.prec());
    for m in 1..n_max.min(64) {
        if cheng_denominator(g, m).is_zero() {
            return Err(resonance_error(g, m));
        }
    }
    // coefficients via a_m = (a_{m−2} − Ē a_{m−1})/D_m, cached per precision
    let cache = std::cell::RefCell::new((0u32, Vec::<Float>::new()));
    eval_series(g, x, prec, n_max, |m, p| {
        let mut c = cache.borrow_mut();
        if c.0 != p {
            *c = (p, vec![Float::with_val(p, 1)]);
        }
        let e = Float::with_val(p, ebar);
        while c.1.len() <= m {
            let k = c.1.len();
            let d = cheng_denominator(g, k);
            if d.is_zero() {
                return Err(resonance_error(g, k));
            }
            let mut num = -Float::with_val(p, &e * &c.1[k - 1]);
            if k >= 2 {
                num += &c.1[k - 2];
            }
            c.1.push(num / q_to_float(&d, p));
        }
        Ok(c.1[m].clone())
    })
}

/// χ(x) on the resonant locus with finite part C at index J.
pub fn regulated_series_eval(g: &[Q; 3], ebar: &Float, c: &Float, x: &Float, n_max: usize) -> Result<Float> {
    let prec = ebar.prec().max(x.prec());
    let j = resonant_level(g)?;
    let cache = std::cell::RefCell::new((0u32, Vec::<Float>::new()));
    eval_series(g, x, prec, n_max, |m, p| {
        let mut cc = cache.borrow_mut();
        if cc.0 != p || cc.1.len() <= m {
            let e = Float::with_val(p, ebar);
            let cv = Float::with_val(p, c);
            let s = cheng_regulated_closed_form(g, &e, &cv, (m + 1).max(2 * cc.1.len()).max(j + 1))?;
            *cc = (p, s.coefficients);
        }
        Ok(cc.1[m].clone())
    })
}

/// 1 + Ē²/(3(3−g0+g1)(3−g0+g2)), the numerator of the J = 2 double limit.
pub fn dublim_numerator(g: &[Q; 3], ebar: &Float) -> Float {
    let prec = ebar.prec();
    let d = qi(3) * (qi(3) - &g[0] + &g[1]) * (qi(3) - &g[0] + &g[2]);
    Float::with_val(prec, 1) + Float::with_val(prec, ebar.clone().square()) / q_to_float(&d, prec)
}

/// Ē± = ±3√(3/2)·√(3+2l), where the x⁶ coefficient of the second iterate at
/// g_qes(2, l) stays finite.
pub fn double_limit_ebar(l: &Q, prec: u32) -> Result<(Float, Float)> {
    let arg = qi(3) + qi(2) * l;
    if arg < Q::zero() {
        return Err(QesError::InvalidParameter(format!(
            "3 + 2l = {arg} < 0: the QES pair is complex"
        )));
    }
    let v = Float::with_val(prec, 3) * Float::with_val(prec, q_to_float(&q(3, 2), prec).sqrt())
        * q_to_float(&arg, prec).sqrt();
    Ok((-v.clone(), v))
}

/// Exact closed-form coefficients as polynomials in Ē (useful for printing).
pub fn symbolic_closed_form(g: &[Q; 3], n: usize) -> Result<ChengSeries<EPolynomial>> {
    cheng_closed_form(g, &EPolynomial::x(crate::bdpoly::EVar::Ebar), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdpoly::EVar;
    use crate::params::g_qes;
    use proptest::prelude::*;

    fn ebar() -> EPolynomial {
        EPolynomial::x(EVar::Ebar)
    }

    #[test]
    fn first_iterate() {
        let g = [q(1, 4), qi(1), q(7, 4)];
        let s = cheng_iterate(&g, &ebar(), 1).unwrap();
        assert_eq!(s.coefficients.len(), 3);
        assert_eq!(s.coefficients[1], ebar().scale(&(-Q::one() / cheng_denominator(&g, 1))));
        assert_eq!(s.coefficients[2], EPolynomial::constant(EVar::Ebar, Q::one() / cheng_denominator(&g, 2)));
    }

    #[test]
    fn resonant_denominator_is_reported() {
        let g = g_qes(1, &qi(0), false).unwrap();
        let err = cheng_iterate(&g, &0.5f64, 1).unwrap_err();
        assert!(matches!(err, QesError::Resonance { .. }));
    }

    #[test]
    fn regulated_j1_stays_finite() {
        let g = g_qes(1, &qi(0), false).unwrap();
        let c = 1.25f64;
        let s = cheng_iterate_regulated(&g, &0.0, &c, 6).unwrap();
        assert!(s.coefficients.iter().all(|v| v.is_finite()));
        let cf = cheng_regulated_closed_form(&g, &0.0, &c, 13).unwrap();
        for m in 0..=6 {
            assert!((s.coefficients[m] - cf.coefficients[m]).abs() < 1e-15);
        }
    }

    #[test]
    fn double_limit_values() {
        let (m, p) = double_limit_ebar(&qi(0), 128).unwrap();
        assert!((p.to_f64() - 4.5f64.sqrt() * 3.0).abs() < 1e-14);
        assert_eq!(m.to_f64(), -p.to_f64());
        let g = g_qes(2, &q(1, 3), false).unwrap();
        let (_, e) = double_limit_ebar(&q(1, 3), 128).unwrap();
        assert!(dublim_numerator(&g, &e).abs() < 1e-35);
        assert!(double_limit_ebar(&qi(-2), 64).is_err());
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-40i64..40, 1i64..9).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn iterates_agree_with_closed_form(a in small_q(), b in small_q(), n in 1usize..8) {
            let g = [a.clone(), b.clone(), qi(3) - a - b];
            let it = cheng_iterate(&g, &ebar(), n);
            let cf = cheng_closed_form(&g, &ebar(), n + 1);
            if let (Ok(it), Ok(cf)) = (it, cf) {
                for m in 0..=n {
                    prop_assert_eq!(&it.coefficients[m], &cf.coefficients[m]);
                }
            }
        }
    }
}
