//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `num/den`, with the denominator dropped when it is 1.
pub fn display(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always `num/den`; used by the on-disk cache.
pub fn to_wire(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `a`, `a/b` and finite decimals such as `-0.25`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let f: BigInt = fracpart.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), fracpart.len());
        let mag = w.abs() * &scale + f;
        let n = if negative { -mag } else { mag };
        return Ok(Rational::new(n, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Both parts overflow f64: shift them down together.
            let bits = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> bits).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> bits).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn pow_int(base: u64, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

pub mod serde_rational {
    //! Serialize a rational as a `"num/den"` string.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&display(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_map {
    use std::collections::BTreeMap;

    use super::*;
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &display(v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<String, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| parse(&v).map(|q| (k, q)).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_drops_unit_denominator() {
        assert_eq!(display(&frac(6, 3)), "2");
        assert_eq!(display(&frac(-1, 30)), "-1/30");
        assert_eq!(to_wire(&int(5)), "5/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-0.25").unwrap(), frac(-1, 4));
        assert_eq!(parse("-.5").unwrap(), frac(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn float_conversion_of_huge_values() {
        let big = Rational::new(pow_int(10, 400), pow_int(10, 399) * BigInt::from(4));
        assert!((to_f64(&big) - 2.5).abs() < 1e-12);
    }
}
