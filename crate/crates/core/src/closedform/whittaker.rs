//! The E = 0 eigenfunction of ℋ₂(2J+4l+2, −J−1/2) for odd J:
//!
//! ψ(x) = 2^{J/4} Γ(3/4 + J/2 + l/2) / √π · x^{−3/2} · W_{−J/4−1/4−l/2, J/4}(x⁴/2),
//!
//! and the value of the free coefficient Q_J(0) that makes the projectively
//! trivial series reproduce it.

use rug::Float;

use crate::error::{QesError, Result};
use crate::mp::{gamma_q, pi, powq, q_to_float};
use crate::rational::{q, qi, Q};
use crate::special::whittaker_w;

fn check_odd(j: u32) -> Result<()> {
    if j.is_multiple_of(2) {
        return Err(QesError::InvalidParameter(format!("J must be odd, got {j}")));
    }
    Ok(())
}

/// ψ(x) at x > 0 (precision of `x`).
pub fn whittaker_solution(j: u32, l: &Q, x: &Float) -> Result<Float> {
    check_odd(j)?;
    if *x <= 0 {
        return Err(QesError::InvalidParameter("x must be positive".into()));
    }
    let prec = x.prec();
    let jq = qi(j as i64);
    let g_arg = q(3, 4) + &jq / qi(2) + l / qi(2);
    if g_arg <= Q::from_integer(0.into()) {
        return Err(QesError::InvalidParameter(format!(
            "3/4 + J/2 + l/2 = {g_arg} must be positive for the integral representation"
        )));
    }
    let kappa = q_to_float(&(-&jq / qi(4) - q(1, 4) - l / qi(2)), prec);
    let mu = q_to_float(&(&jq / qi(4)), prec);
    let z = Float::with_val(prec, x.clone().square().square()) / 2u32;
    let w = whittaker_w(&kappa, &mu, &z)?;
    let norm = powq(&Float::with_val(prec, 2), &(&jq / qi(4))) * gamma_q(&g_arg, prec)?
        / pi(prec).sqrt();
    Ok(norm * powq(x, &q(-3, 2)) * w)
}

/// Q_J(0) = (−1)^{J/2−1/2} 2^{5J/2} √π Γ(J/2+1/2) Γ(J/2+3/4+l/2) / (Γ(J/2) Γ(3/4+l/2)).
pub fn qj0_constant(j: u32, l: &Q, prec: u32) -> Result<Float> {
    check_odd(j)?;
    let jh = q(j as i64, 2);
    let num = gamma_q(&(&jh + q(1, 2)), prec)? * gamma_q(&(&jh + q(3, 4) + l / qi(2)), prec)?;
    let den = gamma_q(&jh, prec)? * gamma_q(&(q(3, 4) + l / qi(2)), prec)?;
    let sign = if ((j - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let two = powq(&Float::with_val(prec, 2), &(qi(5) * &jh));
    Ok(two * pi(prec).sqrt() * num / den * sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::parse_float;

    #[test]
    fn constant_for_j1() {
        let c = qj0_constant(1, &qi(0), 128).unwrap().to_f64();
        assert!((c - 4.184198480212407).abs() < 1e-12, "{c}");
        assert!(qj0_constant(2, &qi(0), 64).is_err());
        for j in [1, 3, 5] {
            for l in [qi(0), qi(1)] {
                let v = qj0_constant(j, &l, 64).unwrap();
                assert!(v.is_finite() && !v.is_zero());
            }
        }
    }

    #[test]
    fn decays_like_the_wkb_form() {
        // ψ · x^{5/2+J+2l} e^{x⁴/4} tends to a constant
        let f = |x: &str| {
            let x = parse_float(x, 128).unwrap();
            let v = whittaker_solution(1, &qi(0), &x).unwrap();
            let e = Float::with_val(128, x.clone().square().square() / 4u32).exp();
            (v * e * powq(&x, &q(7, 2))).to_f64()
        };
        let (a, b) = (f("3"), f("4"));
        assert!((a / b - 1.0).abs() < 0.02, "{a} {b}");
    }
}
