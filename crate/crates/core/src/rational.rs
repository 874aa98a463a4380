//! Exact rational helpers on top of `num::BigRational`.
//!
//! Every bound, LP value and coefficient in the crate is a [`Rational`]. The
//! underlying type keeps values in lowest terms with a positive denominator.

use std::str::FromStr;

use num::bigint::{BigInt, BigUint, Sign};
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn from_biguint(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

pub fn floor_nonneg(q: &Rational) -> BigUint {
    debug_assert!(!q.is_negative());
    q.floor().to_integer().to_biguint().unwrap_or_default()
}

pub fn ceil_nonneg(q: &Rational) -> BigUint {
    debug_assert!(!q.is_negative());
    q.ceil().to_integer().to_biguint().unwrap_or_default()
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Lossy conversion for display only. Never used in a decision.
pub fn approx(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, an integer, or a terminating decimal such as `"0.42"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::invalid(format!("cannot parse '{text}' as a rational"));
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut num = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(num, den));
    }
    BigInt::from_str(text).map(Rational::from_integer).map_err(|_| bad())
}

/// Serialized form of a rational: decimal-free numerator/denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalRepr {
    fn from(q: &Rational) -> Self {
        RationalRepr {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalRepr> for Rational {
    type Error = Error;

    fn try_from(r: &RationalRepr) -> Result<Rational> {
        parse_rational(&format!("{}/{}", r.num, r.den))
    }
}

/// True when `q` is in lowest terms with a positive denominator.
pub fn is_canonical(q: &Rational) -> bool {
    q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
}
