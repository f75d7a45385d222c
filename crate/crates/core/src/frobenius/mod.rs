//! Local series solutions at the origin.
//!
//! [`frobenius`] builds the series from any indicial exponent of a
//! [`LinearOde`]. When the series runs into a second exponent (a resonance)
//! it is continued by minimal subtraction: the coefficient at the resonant
//! index is set to zero and the obstruction is absorbed into a logarithmic
//! term `c·log(x)·ψ_L`, where ψ_L is the pure series from the upper exponent.

mod bender_dunne;
mod cheng;
mod resonance;

pub use bender_dunne::{bd_irregular_series_eval, bd_series_eval, irregular_q_values};
pub use cheng::{
    cheng_closed_form, cheng_denominator, cheng_iterate, cheng_iterate_regulated,
    cheng_regulated_closed_form, cheng_series_eval, double_limit_ebar, dublim_numerator,
    regulated_constant, regulated_series_eval, symbolic_closed_form, ChengSeries,
};
pub use resonance::{is_projectively_trivial, resonant_log_coefficient, ResonanceInfo};

use num_traits::{One, ToPrimitive, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::bdpoly::EPolynomial;
use crate::error::{QesError, Result};
use crate::ode::LinearOde;
use crate::rational::{q_f64, qi, Q};
use crate::ring::Ring;

/// How to treat an exactly vanishing indicial factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResonancePolicy {
    /// Report the resonance as an error.
    Error,
    /// Continue through it with a logarithmic term (minimal subtraction).
    Log,
}

/// The logarithmic part `coefficient · log(x) · Σ companion[k] x^{ρ_L + d k}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogPart<T> {
    pub coefficient: T,
    #[serde(with = "crate::rational::serde_q")]
    pub companion_exponent: Q,
    pub companion: Vec<T>,
    /// Series index at which the resonance occurs.
    pub index: usize,
}

/// Σ_m coefficients[m]·x^{exponent + step·m} (+ an optional log part).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusSolution<T> {
    #[serde(with = "crate::rational::serde_q")]
    pub exponent: Q,
    pub step: u32,
    pub coefficients: Vec<T>,
    pub log: Option<LogPart<T>>,
    pub truncation: usize,
}

impl<T: Ring> FrobeniusSolution<T> {
    /// Coefficient of the log term, zero when there is none.
    pub fn log_coefficient(&self) -> T {
        match &self.log {
            Some(lp) => lp.coefficient.clone(),
            None => self.coefficients[0].zero_like(),
        }
    }

    /// Monodromy phase relation ψ(e^{2πi}x) = e^{2πi ρ}ψ(x) holds iff there
    /// is no (nonzero) logarithm.
    pub fn is_projectively_trivial(&self) -> bool {
        self.log
            .as_ref()
            .is_none_or(|lp| lp.coefficient.is_exact_zero())
    }
}

/// Frobenius series of `ode` from exponent `rho` at energy `energy`, with
/// `terms` coefficients (indices 0..terms) and a₀ = 1.
pub fn frobenius<T: Ring>(
    ode: &LinearOde,
    rho: &Q,
    energy: &T,
    terms: usize,
    policy: ResonancePolicy,
) -> Result<FrobeniusSolution<T>> {
    frobenius_inner(ode, rho, energy, terms, policy, 0)
}

fn frobenius_inner<T: Ring>(
    ode: &LinearOde,
    rho: &Q,
    energy: &T,
    terms: usize,
    policy: ResonancePolicy,
    depth: usize,
) -> Result<FrobeniusSolution<T>> {
    if !ode.indicial(rho).is_zero() {
        return Err(QesError::InvalidParameter(format!(
            "{rho} is not an indicial exponent"
        )));
    }
    let d = ode.step() as usize;
    let dq = qi(d as i64);
    let s = qi(ode.sign as i64);
    let e_shift = ode.order / d;
    let pot: Vec<(usize, &Q)> = ode
        .potential
        .iter()
        .map(|t| ((ode.order + t.power as usize) / d, &t.coeff))
        .collect();
    let zero = energy.zero_like();
    let mut a: Vec<T> = Vec::with_capacity(terms);
    a.push(energy.one_like());
    let mut log: Option<LogPart<T>> = None;
    for m in 1..terms {
        let p = rho + qi(m as i64) * &dq;
        let mut num = if m >= e_shift {
            energy.mul(&a[m - e_shift])
        } else {
            zero.clone()
        };
        for (shift, v) in &pot {
            if m >= *shift {
                num = num.sub(&a[m - shift].scale(v));
            }
        }
        if let Some(lp) = &log {
            // contribution s·Π′(ρ+dm)·b_{m−J} from differentiating x^p log x
            let k = m - lp.index;
            if k < lp.companion.len() {
                let w = &s * ode.indicial_derivative(&p);
                num = num.sub(&lp.coefficient.mul(&lp.companion[k]).scale(&w));
            }
        }
        let den = &s * ode.indicial(&p);
        if den.is_zero() {
            match policy {
                ResonancePolicy::Error => {
                    return Err(QesError::Resonance {
                        power: crate::rational::q_str(&p),
                    })
                }
                ResonancePolicy::Log => {
                    if depth > 0 || log.is_some() {
                        return Err(QesError::Unsupported(
                            "more than one resonance along a single series".into(),
                        ));
                    }
                    let w = &s * ode.indicial_derivative(&p);
                    let coefficient = num.scale(&(Q::one() / w));
                    let companion =
                        frobenius_inner(ode, &p, energy, terms.saturating_sub(m).max(1), ResonancePolicy::Error, depth + 1)
                            .map_err(|e| match e {
                                QesError::Resonance { .. } => QesError::Unsupported(
                                    "more than one resonance along a single series".into(),
                                ),
                                other => other,
                            })?;
                    log = Some(LogPart {
                        coefficient,
                        companion_exponent: p.clone(),
                        companion: companion.coefficients,
                        index: m,
                    });
                    a.push(zero.clone());
                    continue;
                }
            }
        }
        a.push(num.scale(&(Q::one() / den)));
    }
    Ok(FrobeniusSolution {
        exponent: rho.clone(),
        step: d as u32,
        coefficients: a,
        log,
        truncation: terms,
    })
}

/// Falling factorial p(p−1)⋯(p−k+1) and its derivative in p.
fn falling(p: f64, k: usize) -> (f64, f64) {
    let mut f = 1.0;
    let mut df = 0.0;
    for i in 0..k {
        let t = p - i as f64;
        df = df * t + f;
        f *= t;
    }
    (f, df)
}

impl FrobeniusSolution<f64> {
    /// ψ and its first `k` derivatives at x > 0.
    pub fn eval_derivs(&self, x: f64, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; k + 1];
        let d = self.step as f64;
        let rho = q_f64(&self.exponent);
        add_series(&mut out, &self.coefficients, rho, d, x, 1.0, false);
        if let Some(lp) = &self.log {
            let rl = q_f64(&lp.companion_exponent);
            add_series(&mut out, &lp.companion, rl, d, x, lp.coefficient, true);
        }
        out
    }

    /// Value of the series without the log part, together with the log
    /// part's companion, for analytic integration near the origin.
    pub fn terms(&self) -> Vec<(f64, f64)> {
        let d = self.step as f64;
        let rho = q_f64(&self.exponent);
        self.coefficients
            .iter()
            .enumerate()
            .map(|(m, c)| (rho + d * m as f64, *c))
            .collect()
    }
}

fn add_series(out: &mut [f64], coeffs: &[f64], rho: f64, d: f64, x: f64, scale: f64, with_log: bool) {
    let lx = x.ln();
    for (m, c) in coeffs.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let p = rho + d * m as f64;
        for (k, o) in out.iter_mut().enumerate() {
            let (f, df) = falling(p, k);
            let xp = x.powf(p - k as f64);
            let v = if with_log { (f * lx + df) * xp } else { f * xp };
            *o += scale * c * v;
        }
    }
}

/// Evaluate a polynomial at a ring element by Horner's rule.
pub fn eval_poly_ring<T: Ring>(p: &EPolynomial, x: &T) -> T {
    let mut acc = x.zero_like();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&x.from_q_like(c));
    }
    acc
}

/// Sum a series whose n-th term is produced by `term(n, prec)`, stopping when
/// five consecutive terms are each below 2^{-prec}·|sum| and shrink by at
/// least a factor 2 (or vanish). Returns (sum, max |partial sum|).
pub(crate) fn sum_terms<F>(prec: u32, n_max: usize, mut term: F) -> Result<(Float, Float)>
where
    F: FnMut(usize, u32) -> Result<Float>,
{
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let mut sum = Float::new(prec);
    let mut max_partial = Float::new(prec);
    let mut prev_abs: Option<Float> = None;
    let mut quiet = 0;
    for n in 0..n_max {
        let t = term(n, prec)?;
        sum += &t;
        let sa = Float::with_val(prec, sum.abs_ref());
        if sa > max_partial {
            max_partial = sa.clone();
        }
        let ta = Float::with_val(prec, t.abs_ref());
        let small = ta <= Float::with_val(prec, &eps * &sa);
        let shrinking = match &prev_abs {
            Some(pa) => ta.is_zero() || Float::with_val(prec, &ta * 2u32) <= *pa,
            None => false,
        };
        if small && (shrinking || ta.is_zero()) {
            quiet += 1;
            if quiet >= 5 {
                return Ok((sum, max_partial));
            }
        } else {
            quiet = 0;
        }
        if !ta.is_zero() {
            prev_abs = Some(ta);
        }
    }
    Err(QesError::Convergence(n_max))
}

/// Largest precision the automatic cancellation control will use.
pub const MAX_PREC: u32 = 4096;

/// Evaluate `f` at `prec` bits; when the reported cancellation ratio
/// (max |partial sum| / |value|) exceeds 10¹⁰, rerun with enough extra bits
/// to absorb it.
pub(crate) fn with_cancellation_control<F>(prec: u32, mut f: F) -> Result<Float>
where
    F: FnMut(u32) -> Result<(Float, Float)>,
{
    let mut p = prec;
    loop {
        let (v, m) = f(p)?;
        if v.is_zero() || m.is_zero() {
            return Ok(Float::with_val(prec, v));
        }
        let ratio = Float::with_val(p, &m / Float::with_val(p, v.abs_ref())).to_f64();
        if ratio <= 1e10 {
            return Ok(Float::with_val(prec, v));
        }
        let need = prec + ratio.log2().ceil().to_u32().unwrap_or(MAX_PREC) + 32;
        if p >= need {
            return Ok(Float::with_val(prec, v));
        }
        if need > MAX_PREC {
            return Err(QesError::PrecisionCeiling {
                max_bits: MAX_PREC,
                needed_bits: need,
            });
        }
        p = need;
    }
}
