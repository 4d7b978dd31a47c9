//! Exact rationals and a few helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-3/4"`, `"1.25"`, `"+2"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n.trim())?;
        let d = parse_decimal(d.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    if body.is_empty() {
        return None;
    }
    let (whole, fracpart) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && fracpart.is_empty() {
        return None;
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{fracpart}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), fracpart.len());
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Fractional part in `[0, 1)`.
pub fn fract(r: &Rational) -> Rational {
    r - Rational::from_integer(floor(r))
}

/// Ordering key for "simplest" rationals: smaller denominator, then smaller
/// magnitude, then positive before negative.
pub fn simplicity_key(r: &Rational) -> (BigInt, BigInt, bool) {
    (r.denom().clone(), r.numer().abs(), r.is_negative())
}

/// Smallest integer not below `r`.
pub fn ceil(r: &Rational) -> BigInt {
    r.numer().div_ceil(r.denom())
}

/// Serde adapter storing a rational as its `a/b` text.
pub mod text {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational `{s}`")))
    }
}

/// Serde adapter for a list of rationals stored as text.
pub mod text_vec {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("invalid rational `{s}`"))))
            .collect()
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
