//! The ₀F₂ solutions of the adjoint third-order problem on the J = 1 locus
//! at Ē = 0, with argument z = x⁶/216:
//!
//! χ_C=0 = x^{2−g0} ₀F₂(; 1/2, 2−g0/2; z),
//! χ_sub = x^{2−g0} (₀F₂(; 1/2, 2−g0/2; z) − k x³ ₀F₂(; 3/2, 5/2−g0/2; z)),
//! k = Γ(2−g0/2) / (3√6 Γ(5/2−g0/2)),
//!
//! where k removes the e^{x²/2} growth shared by both series.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::frobenius::with_cancellation_control;
use crate::mp::{gamma_q, pi, powq, q_to_float};
use crate::rational::{q, qi, serde_q, Q};
use crate::special::hyp0f2_with_max;

/// x^{prefactor} ₀F₂(; b1, b2; x⁶/216).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeomSeries {
    #[serde(with = "serde_q::vec")]
    pub lower: Vec<Q>,
    #[serde(with = "serde_q")]
    pub prefactor: Q,
}

impl HypergeomSeries {
    pub fn new(b1: Q, b2: Q, prefactor: Q) -> Self {
        HypergeomSeries {
            lower: vec![b1, b2],
            prefactor,
        }
    }

    /// Value and largest partial-sum magnitude at `prec` bits.
    fn eval_with_max(&self, x: &Float, prec: u32) -> Result<(Float, Float)> {
        let z = Float::with_val(prec, x.clone().square() * x).square() / 216u32;
        let b1 = q_to_float(&self.lower[0], prec);
        let b2 = q_to_float(&self.lower[1], prec);
        let (f, m) = hyp0f2_with_max(&b1, &b2, &z, prec)?;
        let pre = powq(&Float::with_val(prec, x), &self.prefactor);
        Ok((Float::with_val(prec, &f * &pre), m * pre))
    }

    pub fn eval(&self, x: &Float) -> Result<Float> {
        Ok(self.eval_with_max(x, x.prec())?.0)
    }

    /// Leading growth constant Γ(b1)Γ(b2)/(2π√3) of
    /// ₀F₂(z) ~ const · z^{(1−b1−b2)/3} e^{3 z^{1/3}}.
    pub fn growth_constant(&self, prec: u32) -> Result<Float> {
        let g = gamma_q(&self.lower[0], prec)? * gamma_q(&self.lower[1], prec)?;
        Ok(g / (pi(prec) * 2u32 * Float::with_val(prec, 3).sqrt()))
    }
}

/// Value of the subdominant combination with its implied regulated constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubdominantValue {
    #[serde(with = "crate::mp::serde_float")]
    pub value: Float,
    /// The finite part C of the regulated x^{5−g0} coefficient reproduced by
    /// k: C = 9(3 − g0)·k = √6 Γ(2−g0/2)/Γ(3/2−g0/2).
    #[serde(with = "crate::mp::serde_float")]
    pub implied_c: Float,
    /// Precision the cancellation control ended up using.
    pub working_bits: u32,
}

/// The coefficient k of the subdominant combination.
pub fn subdominant_k(g0: &Q, prec: u32) -> Result<Float> {
    let a = gamma_q(&(qi(2) - g0 / qi(2)), prec)?;
    let b = gamma_q(&(q(5, 2) - g0 / qi(2)), prec)?;
    Ok(a / (Float::with_val(prec, 6).sqrt() * 3u32 * b))
}

/// The two series of the combination.
pub fn subdominant_parts(g0: &Q) -> (HypergeomSeries, HypergeomSeries) {
    let p = qi(2) - g0;
    (
        HypergeomSeries::new(q(1, 2), qi(2) - g0 / qi(2), p.clone()),
        HypergeomSeries::new(q(3, 2), q(5, 2) - g0 / qi(2), p + qi(3)),
    )
}

/// χ_sub(x) at the precision of `x`, raising the working precision to
/// absorb the e^{x²}-scale cancellation between the two series.
pub fn subdominant_third_order(g0: &Q, x: &Float) -> Result<SubdominantValue> {
    if *x <= 0 {
        return Err(QesError::InvalidParameter("x must be positive".into()));
    }
    let prec = x.prec();
    let (f1, f2) = subdominant_parts(g0);
    let mut used = prec;
    let value = with_cancellation_control(prec, |p| {
        used = p;
        let xp = Float::with_val(p, x);
        let k = subdominant_k(g0, p)?;
        let (a, ma) = f1.eval_with_max(&xp, p)?;
        let (b, mb) = f2.eval_with_max(&xp, p)?;
        let kb = Float::with_val(p, &k * &b);
        let m = ma.max(&Float::with_val(p, &k * &mb));
        Ok((Float::with_val(p, &a - &kb), m))
    })?;
    let implied_c = Float::with_val(prec, 6).sqrt() * gamma_q(&(qi(2) - g0 / qi(2)), prec)?
        / gamma_q(&(q(3, 2) - g0 / qi(2)), prec)?;
    Ok(SubdominantValue {
        value,
        implied_c,
        working_bits: used,
    })
}

/// The C = 0 solution x^{2−g0} ₀F₂(; 1/2, 2−g0/2; x⁶/216).
pub fn c0_solution(g0: &Q, x: &Float) -> Result<Float> {
    subdominant_parts(g0).0.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{regulated_series_eval, cheng_denominator};
    use crate::params::g_qes;

    #[test]
    fn c0_matches_the_regulated_series() {
        let g = g_qes(1, &qi(0), false).unwrap();
        let x = Float::with_val(128, 1.3);
        let zero = Float::new(128);
        let a = c0_solution(&g[0], &x).unwrap();
        let b = regulated_series_eval(&g, &zero, &zero, &x, 10_000).unwrap();
        assert!((Float::with_val(128, &a - &b) / &a).abs().to_f64() < 1e-35);
        let _ = cheng_denominator(&g, 1);
    }

    #[test]
    fn implied_constant_reproduces_k() {
        // −C/D̂_1 is the x^{5−g0} coefficient, D̂_1 = 9(3 − g0) on this locus
        for l in [qi(0), q(1, 3)] {
            let g = g_qes(1, &l, false).unwrap();
            let k = subdominant_k(&g[0], 128).unwrap();
            let v = subdominant_third_order(&g[0], &Float::with_val(128, 1)).unwrap();
            let d = q_to_float(&(qi(9) * (qi(3) - &g[0])), 128);
            let r = Float::with_val(128, &v.implied_c / &d) / &k;
            assert!((r.to_f64() - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn growth_constants_have_the_expected_ratio() {
        let g0 = q(3, 2);
        let (f1, f2) = subdominant_parts(&g0);
        let ratio = (f2.growth_constant(128).unwrap() / f1.growth_constant(128).unwrap()).to_f64();
        let b = q_to_float(&(qi(2) - &g0 / qi(2)), 128);
        let expect = (Float::with_val(128, &b + 0.5).gamma() / Float::with_val(128, b.gamma_ref())).to_f64() / 2.0;
        assert!((ratio - expect).abs() < 1e-14);
        // and the asymptotic form itself, at z = 10⁶ (w = 100)
        let z = Float::with_val(128, 1e6);
        let (v, _) = hyp0f2_with_max(&q_to_float(&f1.lower[0], 128), &q_to_float(&f1.lower[1], 128), &z, 128).unwrap();
        let w = Float::with_val(128, 100);
        let s = q_to_float(&(qi(1) - &f1.lower[0] - &f1.lower[1]), 128) / 3u32;
        let asym = f1.growth_constant(128).unwrap()
            * Float::with_val(128, rug::ops::Pow::pow(z.clone(), &s))
            * Float::with_val(128, w * 3u32).exp();
        assert!(((v / asym).to_f64() - 1.0).abs() < 0.02);
    }
}
