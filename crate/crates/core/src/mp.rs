//! Multiprecision helpers on top of MPFR (`rug::Float`).

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{QesError, Result};
use crate::rational::Q;

/// Default working precision for series and closed forms.
pub const DEFAULT_PREC: u32 = 128;

pub fn q_to_rug(q: &Q) -> Rational {
    let n = Integer::from_str_radix(&q.numer().to_str_radix(16), 16).expect("hex integer");
    let d = Integer::from_str_radix(&q.denom().to_str_radix(16), 16).expect("hex integer");
    Rational::from((n, d))
}

pub fn q_to_float(q: &Q, prec: u32) -> Float {
    Float::with_val(prec, q_to_rug(q))
}

pub fn fl(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// κ = 4/(3√3), the fixed ratio between the second- and third-order energies.
pub fn kappa(prec: u32) -> Float {
    let s3 = Float::with_val(prec, 3).sqrt();
    Float::with_val(prec, 4) / (Float::with_val(prec, 3) * s3)
}

/// Γ(x), refusing the poles at non-positive integers.
pub fn gamma_q(x: &Q, prec: u32) -> Result<Float> {
    if x.is_integer() && *x <= Q::from_integer(0.into()) {
        return Err(QesError::GammaPole(format!("Gamma({x})")));
    }
    Ok(q_to_float(x, prec).gamma())
}

/// x^p for real x > 0 and rational p.
pub fn powq(x: &Float, p: &Q) -> Float {
    let pr = q_to_float(p, x.prec());
    Float::with_val(x.prec(), x.pow(&pr))
}

/// Relative difference |a−b| / max(|a|,|b|), 0 if both vanish.
pub fn rel_diff(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let d = Float::with_val(prec, a - b).abs();
    let m = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    if m.is_zero() {
        Float::new(prec)
    } else {
        d / m
    }
}

/// Decimal rendering with enough digits to round-trip the precision.
pub fn float_str(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    Float::parse(s)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| QesError::Parse(format!("bad float '{s}': {e}")))
}

/// Serde adapter: MPFR floats travel as decimal strings; precision on read is
/// inferred from the number of digits (never below 53 bits).
pub mod serde_float {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Float, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&float_str(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Float, D::Error> {
        let s = String::deserialize(d)?;
        let digits = s.chars().filter(|c| c.is_ascii_digit()).count() as f64;
        let prec = ((digits - 2.0).max(16.0) / std::f64::consts::LOG10_2).ceil() as u32;
        parse_float(&s, prec.max(53)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn kappa_value_and_square() {
        let k = kappa(128);
        assert!((k.to_f64() - 0.769_800_358_919_501).abs() < 1e-15);
        let k2 = Float::with_val(128, &k * &k);
        let want = q_to_float(&q(16, 27), 128);
        assert!(rel_diff(&k2, &want) < 1e-36);
    }

    #[test]
    fn gamma_poles_are_refused() {
        assert!(gamma_q(&q(0, 1), 64).is_err());
        assert!(gamma_q(&q(-3, 1), 64).is_err());
        let g = gamma_q(&q(1, 2), 128).unwrap();
        let sp = pi(128).sqrt();
        assert!(rel_diff(&g, &sp) < 1e-36);
    }

    #[test]
    fn float_strings_round_trip() {
        let k = kappa(128);
        let back = parse_float(&float_str(&k), 128).unwrap();
        assert!(rel_diff(&k, &back) < 1e-37);
    }
}
