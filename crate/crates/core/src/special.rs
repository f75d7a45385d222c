//! The few special functions the closed forms need, in MPFR arithmetic:
//! the confluent function U (and Whittaker W) by an exp-sinh integral,
//! K_ν by the trapezoid rule on its cosh integral, and ₀F₂ by its series.

use rug::Float;

use crate::error::{QesError, Result};
use crate::frobenius::sum_terms;
use crate::mp::pi;

const GUARD: u32 = 32;

fn fpow(x: &Float, y: &Float) -> Float {
    rug::ops::Pow::pow(x.clone(), y)
}

/// Trapezoid sum h·Σ_k f(kh) over the real line (or over the half line
/// for an even integrand, with the usual half weight at the origin), halving h until two levels agree to the precision.
/// f must decay at least exponentially in both directions.
fn trapezoid<F: Fn(&Float) -> Float>(prec: u32, f: F, even: bool) -> Result<Float> {
    let wp = prec + GUARD;
    let eps = Float::with_val(wp, Float::i_exp(1, -(prec as i32) - 8));
    let tail = |h: &Float, start: u64, step: u64, sign: i32, acc: &mut Float| {
        let mut k = start;
        let mut quiet = 0;
        while quiet < 3 && k < 1_000_000 {
            let u = Float::with_val(wp, h * k) * sign;
            let v = f(&u);
            if v.is_nan() {
                break;
            }
            let small = Float::with_val(wp, v.abs_ref()) <= Float::with_val(wp, &eps * Float::with_val(wp, acc.abs_ref()));
            *acc += v;
            quiet = if small { quiet + 1 } else { 0 };
            k += step;
        }
    };
    let mut h = Float::with_val(wp, 0.5);
    let zero = Float::new(wp);
    let mut sum = f(&zero);
    if even {
        sum /= 2;
    }
    let f0 = sum.clone();
    // all points of the first level
    let mut pos = Float::new(wp);
    tail(&h, 1, 1, 1, &mut pos);
    let mut neg = Float::new(wp);
    if !even {
        tail(&h, 1, 1, -1, &mut neg);
    }
    sum = Float::with_val(wp, &f0 + &pos) + &neg;
    let mut est = Float::with_val(wp, &sum * &h);
    for _ in 0..14 {
        h /= 2;
        // new points are the odd multiples of the halved step
        let mut add = Float::new(wp);
        let mut k = 1u64;
        let mut quiet = 0;
        let mut scale = Float::with_val(wp, sum.abs_ref());
        while quiet < 3 && k < 4_000_000 {
            let u = Float::with_val(wp, &h * k);
            let mut v = f(&u);
            if !even {
                v += f(&Float::with_val(wp, -&u));
            }
            if v.is_nan() {
                break;
            }
            let small = Float::with_val(wp, v.abs_ref()) <= Float::with_val(wp, &eps * &scale);
            add += v;
            scale = Float::with_val(wp, Float::with_val(wp, &sum + &add).abs_ref());
            quiet = if small { quiet + 1 } else { 0 };
            k += 2;
        }
        sum += add;
        let next = Float::with_val(wp, &sum * &h);
        let diff = Float::with_val(wp, &next - &est).abs();
        est = next;
        if diff <= Float::with_val(wp, &eps * Float::with_val(wp, est.abs_ref())) * 256u32 {
            return Ok(Float::with_val(prec, est));
        }
    }
    Err(QesError::Convergence(14))
}

/// Tricomi's confluent hypergeometric function U(a, b, z) for a > 0, z > 0:
/// U = Γ(a)⁻¹ ∫₀^∞ e^{−zt} t^{a−1} (1+t)^{b−a−1} dt, with t = exp(π/2·sinh u).
pub fn hyperu(a: &Float, b: &Float, z: &Float) -> Result<Float> {
    let prec = a.prec().max(z.prec());
    if *a <= 0 || *z <= 0 {
        return Err(QesError::InvalidParameter(
            "the U integral needs a > 0 and z > 0".into(),
        ));
    }
    let wp = prec + GUARD;
    let half_pi = pi(wp) / 2u32;
    let c = Float::with_val(wp, b - a) - 1u32;
    let f = |u: &Float| {
        let s = Float::with_val(wp, u.sinh_ref()) * &half_pi;
        let t = s.clone().exp();
        let jac = Float::with_val(wp, u.cosh_ref()) * &half_pi;
        // after t → t/z: e^{−t} t^{a} (1+t/z)^{c} · (π/2) cosh u, the extra t
        // being dt/du / t; the peak then sits near t = a whatever z is
        let log_part = Float::with_val(wp, -&t)
            + Float::with_val(wp, a * &s)
            + Float::with_val(wp, &c * Float::with_val(wp, Float::with_val(wp, &t / z) + 1u32).ln());
        log_part.exp() * jac
    };
    let integral = trapezoid(prec, f, false)?;
    let za = fpow(&Float::with_val(wp, z), &Float::with_val(wp, -a));
    Ok(Float::with_val(prec, integral * za / Float::with_val(wp, a.gamma_ref())))
}

/// Whittaker W_{k,m}(z) = e^{−z/2} z^{m+1/2} U(1/2 + m − k, 1 + 2m, z).
pub fn whittaker_w(k: &Float, m: &Float, z: &Float) -> Result<Float> {
    let prec = z.prec();
    let a = Float::with_val(prec, m - k) + 0.5;
    let b = Float::with_val(prec, m * 2u32) + 1u32;
    let u = hyperu(&a, &b, z)?;
    let pre = Float::with_val(prec, -(Float::with_val(prec, z / 2u32))).exp()
        * Float::with_val(prec, fpow(z, &Float::with_val(prec, m + 0.5)));
    Ok(pre * u)
}

/// Modified Bessel function K_ν(z) = ∫₀^∞ e^{−z cosh t} cosh(νt) dt, z > 0.
pub fn bessel_k(nu: &Float, z: &Float) -> Result<Float> {
    let prec = z.prec();
    if *z <= 0 {
        return Err(QesError::InvalidParameter("K_ν needs z > 0".into()));
    }
    let wp = prec + GUARD;
    let f = |t: &Float| {
        let e = Float::with_val(wp, -(Float::with_val(wp, z * Float::with_val(wp, t.cosh_ref())))).exp();
        e * Float::with_val(wp, Float::with_val(wp, nu * t).cosh())
    };
    trapezoid(prec, f, true)
}

/// ₀F₂(; b1, b2; z) = Σ_k z^k / ((b1)_k (b2)_k k!) and the largest partial
/// sum magnitude (for cancellation control).
pub fn hyp0f2_with_max(b1: &Float, b2: &Float, z: &Float, prec: u32) -> Result<(Float, Float)> {
    for b in [b1, b2] {
        if b.is_integer() && *b <= 0 {
            return Err(QesError::GammaPole(format!("₀F₂ lower parameter {b}")));
        }
    }
    let mut term = Float::with_val(prec, 1);
    sum_terms(prec, 100_000, |k, p| {
        if k > 0 {
            let kk = k as u32 - 1;
            let d = Float::with_val(p, b1 + kk) * Float::with_val(p, b2 + kk) * (kk + 1);
            term = Float::with_val(p, &term * z) / d;
        }
        Ok(term.clone())
    })
}

/// ₀F₂(; b1, b2; z).
pub fn hyp0f2(b1: &Float, b2: &Float, z: &Float) -> Result<Float> {
    Ok(hyp0f2_with_max(b1, b2, z, z.prec())?.0)
}
