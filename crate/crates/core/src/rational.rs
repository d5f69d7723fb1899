//! Exact rational helpers shared by every module: parsing, formatting,
//! exact float conversion and a small exact-or-approximate value type.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, integers and decimal literals (`"-0.125"`, `"1e-3"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| err())?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(numer);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact conversion of a finite float; every finite `f64` is a dyadic rational.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Nearest float (round-to-nearest as implemented by `num-rational`).
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a rational base.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Exactly representable as `f64` (so it can be written as a JSON number without loss).
pub fn is_f64_exact(q: &Rational) -> bool {
    let x = to_f64(q);
    x.is_finite() && from_f64(x).as_ref() == Some(q)
}

/// A value that is exact when the computation allows it and a float otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => to_f64(q),
            Real::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn zero() -> Self {
        Real::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Real::Exact(Rational::one())
    }

    /// Maximum; stays exact only if both sides are exact.
    pub fn max(self, other: Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(if a >= b { a } else { b }),
            (a, b) => Real::Approx(a.to_f64().max(b.to_f64())),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            (a, b) => Real::Approx(a.to_f64() * b.to_f64()),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => f.write_str(&format_rational(q)),
            Real::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(q) => Exact(q.clone()).serialize(serializer),
            Real::Approx(x) => serializer.serialize_f64(*x),
        }
    }
}

/// Serde adapter for rationals. Serializes as a JSON number when the value is
/// an exactly representable float and as a `"p/q"` string otherwise;
/// deserializes numbers by their decimal text, so `0.1` becomes exactly `1/10`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(i) = self.0.numer().to_i64() {
                return serializer.serialize_i64(i);
            }
        }
        if is_f64_exact(&self.0) && to_f64(&self.0).abs() < 1e15 {
            serializer.serialize_f64(to_f64(&self.0))
        } else {
            serializer.serialize_str(&format_rational(&self.0))
        }
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ExactVisitor)
    }
}

struct ExactVisitor;

impl<'de> Visitor<'de> for ExactVisitor {
    type Value = Exact;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a rational string such as \"3/4\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
        Ok(Exact(int(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
        Ok(Exact(Rational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
        // serde_json hands over the parsed float; its shortest round-trip text
        // recovers the decimal literal the user wrote.
        if !v.is_finite() {
            return Err(E::custom("non-finite number"));
        }
        parse_rational(&format!("{v:?}"))
            .map(Exact)
            .map_err(E::custom)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
        parse_rational(v).map(Exact).map_err(E::custom)
    }
}
