//! Exact rational helpers. Parameters travel as `"p/q"` strings; decimal
//! notation is rejected because it silently breaks exact identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{QesError, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    if t.is_empty() {
        return Err(QesError::Parse("empty rational".into()));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(QesError::Parse(format!(
            "'{t}' looks like a decimal; pass exact rationals as p/q"
        )));
    }
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| QesError::Parse(format!("bad numerator in '{t}'")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| QesError::Parse(format!("bad denominator in '{t}'")))?;
    if d.is_zero() {
        return Err(QesError::Parse(format!("zero denominator in '{t}'")));
    }
    Ok(Q::new(n, d))
}

/// Canonical string: `"3/2"`, `"-5"`, `"0"`.
pub fn q_str(x: &Q) -> String {
    x.to_string()
}

pub fn q_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // huge numerators/denominators: go through the exponent split
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Integer value if `x` is an integer.
pub fn q_as_integer(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// `x` as a positive integer (ℕ⁺), if it is one.
pub fn q_as_positive_integer(x: &Q) -> Option<u64> {
    q_as_integer(x).filter(|&v| v > 0).map(|v| v as u64)
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

pub fn q_pow(x: &Q, k: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..k {
        r *= x;
    }
    r
}

/// Serde adapters writing rationals as strings.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q_str(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&q_str(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_q(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_q("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert_eq!(parse_q(" 6/4 ").unwrap(), q(3, 2));
        assert_eq!(q_str(&q(-6, 4)), "-3/2");
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        assert!(parse_q("1.5").is_err());
        assert!(parse_q("1e3").is_err());
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("").is_err());
    }
}
