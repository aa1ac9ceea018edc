//! Rational helpers: construction shorthands and the `"p/q"` string encoding
//! used by every JSON surface.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or `" -p / q "`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale down through bit shifts
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Floor of `r` modulo `m` into `[0, m)`, for positive rational `m`.
pub fn rem_euclid(r: &Rational, m: &Rational) -> Rational {
    let q = (r / m).floor();
    r - q * m
}

pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = RationalRepr::deserialize(d)?;
        v.to_rational().map_err(serde::de::Error::custom)
    }
}

/// Accepts either a `"p/q"` string or a JSON integer.
#[derive(Debug, Clone, serde::Deserialize, serde::Serialize)]
#[serde(untagged)]
pub enum RationalRepr {
    Text(String),
    Int(i64),
}

impl RationalRepr {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalRepr::Text(s) => parse_rational(s),
            RationalRepr::Int(n) => Ok(rat(*n)),
        }
    }
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr::Text(format_rational(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7));
        assert_eq!(format_rational(&frac(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(12)), "12");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn euclidean_remainder() {
        assert_eq!(rem_euclid(&frac(-1, 2), &rat(2)), frac(3, 2));
        assert_eq!(rem_euclid(&frac(9, 4), &rat(1)), frac(1, 4));
    }
}
