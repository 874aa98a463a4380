//! Certified rational enclosures for `exp` and `ln`.
//!
//! Every function returns an interval `[lo, hi]` with rational endpoints that
//! provably contains the true real value. Series are summed exactly and the
//! truncation error is added as an explicit tail bound; endpoints are then
//! rounded outward to dyadic rationals with `bits` fractional bits so the
//! numbers stay small.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{approx, int, Rational};

/// Number of fractional bits kept after outward rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: 96 }
    }
}

impl Precision {
    pub fn new(bits: u32) -> Self {
        Precision { bits: bits.max(8) }
    }

    fn guarded(self, extra: u32) -> Self {
        Precision {
            bits: self.bits + extra,
        }
    }
}

/// A closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(serialize_with = "crate::report::rational")]
    lo: Rational,
    #[serde(serialize_with = "crate::report::rational")]
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("interval endpoints out of order"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(q: Rational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    /// Where the enclosed value sits relative to `q`.
    ///
    /// Fails with `Indeterminate` when `q` lies inside a non-degenerate
    /// interval.
    pub fn compare(&self, q: &Rational) -> Result<Ordering> {
        if self.hi < *q {
            Ok(Ordering::Less)
        } else if self.lo > *q {
            Ok(Ordering::Greater)
        } else if self.lo == self.hi {
            Ok(Ordering::Equal)
        } else {
            Err(Error::Indeterminate(format!(
                "{} lies inside [{}, {}]",
                approx(q),
                approx(&self.lo),
                approx(&self.hi)
            )))
        }
    }

    /// Certified strict `self < other`; false when certainly `self > other`.
    pub fn certainly_less(&self, other: &Interval) -> Result<bool> {
        if self.hi < other.lo {
            Ok(true)
        } else if self.lo > other.hi {
            Ok(false)
        } else {
            Err(Error::Indeterminate(format!(
                "[{}, {}] overlaps [{}, {}]",
                approx(&self.lo),
                approx(&self.hi),
                approx(&other.lo),
                approx(&other.hi)
            )))
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    /// `1 / self` for an interval that excludes zero.
    pub fn recip(&self) -> Result<Interval> {
        if self.contains(&Rational::zero()) {
            return Err(Error::invalid("reciprocal of an interval containing zero"));
        }
        Ok(Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    /// Rounds `lo` down and `hi` up to multiples of `2^-bits`.
    pub fn round_outward(&self, prec: Precision) -> Interval {
        let scale = BigInt::one() << prec.bits as usize;
        let den = Rational::from_integer(scale.clone());
        let lo = (&self.lo * &den).floor().to_integer();
        let hi = (&self.hi * &den).ceil().to_integer();
        Interval {
            lo: Rational::new(lo, scale.clone()),
            hi: Rational::new(hi, scale),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", approx(&self.lo), approx(&self.hi))
    }
}

/// Enclosure of `e^t` for a rational `t`.
pub fn exp(t: &Rational, prec: Precision) -> Interval {
    // halve until |t| <= 1/2, then square back up
    let mut halvings = 0u32;
    let mut reduced = t.clone();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    while reduced.abs() > half {
        reduced /= int(2);
        halvings += 1;
    }
    let work = prec.guarded(halvings * 2 + 16);
    let mut acc = exp_small(&reduced, work);
    for _ in 0..halvings {
        // e^x > 0, so squaring is monotone on the enclosure
        acc = acc.mul(&acc).round_outward(work);
    }
    acc.round_outward(prec)
}

/// Enclosure of `e^t` over every `t` in an interval.
pub fn exp_interval(t: &Interval, prec: Precision) -> Interval {
    let lo = exp(&t.lo, prec);
    let hi = exp(&t.hi, prec);
    Interval { lo: lo.lo, hi: hi.hi }
}

/// Fixed-point sum with `prec.bits` fractional bits.
///
/// Each truncated division adds at most one unit in the last place, so the
/// running error is tracked in ulps and added to both ends at the end.
fn fixed_point_interval(sum: BigInt, err_ulps: u64, prec: Precision) -> Interval {
    let scale = BigInt::one() << prec.bits as usize;
    let err = BigInt::from(err_ulps);
    Interval {
        lo: Rational::new(&sum - &err, scale.clone()),
        hi: Rational::new(sum + err, scale),
    }
}

/// Taylor series for `|t| <= 1/2`.
fn exp_small(t: &Rational, prec: Precision) -> Interval {
    debug_assert!(t.abs() <= Rational::new(BigInt::one(), BigInt::from(2)));
    let (p, q) = (t.numer(), t.denom());
    let mut term = BigInt::one() << prec.bits as usize;
    let mut sum = term.clone();
    let mut j: u64 = 0;
    // computed term j is within 2 ulps of the true term, since |t|/j <= 1/2
    while !term.is_zero() {
        j += 1;
        term = &term * p / (q * BigInt::from(j));
        sum += &term;
    }
    // rounding: <= 2 ulps per term; tail past a vanished term: <= 2 ulps
    fixed_point_interval(sum, 2 * j + 4, prec)
}

/// Enclosure of `ln(a)` for rational `a > 0`.
///
/// `a` is first scaled by a power of two into `[1/2, 2]`, then
/// `ln a = 2 atanh((a-1)/(a+1))` is summed with `|(a-1)/(a+1)| <= 1/3`.
pub fn ln(a: &Rational, prec: Precision) -> Result<Interval> {
    if !a.is_positive() {
        return Err(Error::invalid("logarithm of a non-positive number"));
    }
    let two = int(2);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut reduced = a.clone();
    let mut shift: i64 = 0;
    while reduced > two {
        reduced /= &two;
        shift += 1;
    }
    while reduced < half {
        reduced *= &two;
        shift -= 1;
    }
    let guard = 16 + 64 - shift.unsigned_abs().max(1).leading_zeros();
    let work = prec.guarded(guard);
    let mut acc = ln_atanh(&reduced, work);
    if shift != 0 {
        let ln2 = ln_atanh(&two, work);
        acc = acc.add(&ln2.scale(&int(shift)));
    }
    Ok(acc.round_outward(prec))
}

/// `2 atanh(z)` with `z = (a-1)/(a+1)`, for `a` in `[1/2, 2]`.
fn ln_atanh(a: &Rational, prec: Precision) -> Interval {
    let z = (a - Rational::one()) / (a + Rational::one());
    if z.is_zero() {
        return Interval::point(Rational::zero());
    }
    let (p, q) = (z.numer().clone(), z.denom().clone());
    let (p2, q2) = (&p * &p, &q * &q);
    let mut power = (BigInt::one() << prec.bits as usize) * &p / &q;
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    // with z^2 <= 1/9 the power error stays below 9/8 ulp and each
    // term below 3 ulps; the tail past a vanished power is below 2 ulps
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = power * &p2 / &q2;
        j += 1;
    }
    let half_interval = fixed_point_interval(sum, 3 * j + 2, prec);
    half_interval.scale(&int(2))
}

/// Enclosure of Euler's number.
pub fn e(prec: Precision) -> Interval {
    exp(&Rational::one(), prec)
}

/// Enclosure of `base^exponent` for rational `base > 0`, real exponent given
/// as a rational.
pub fn pow(base: &Rational, exponent: &Rational, prec: Precision) -> Result<Interval> {
    let work = prec.guarded(16);
    let log = ln(base, work)?;
    let t = log.scale(exponent).round_outward(work);
    Ok(exp_interval(&t, work).round_outward(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn tight(iv: &Interval) -> bool {
        iv.width() <= Rational::new(BigInt::one(), num::pow(BigInt::from(10), 20))
    }

    #[test]
    fn euler_number_digits() {
        let iv = e(Precision::default());
        assert!(tight(&iv));
        // e = 2.71828182845904523536028747135...
        let lo = ratio(271_828_182_845_904_523, 100_000_000_000_000_000);
        let hi = ratio(271_828_182_845_904_524, 100_000_000_000_000_000);
        assert!(*iv.lo() >= lo && *iv.hi() <= hi, "{iv}");
    }

    #[test]
    fn exp_of_zero_and_negative() {
        let one = exp(&Rational::zero(), Precision::default());
        assert!(one.contains(&Rational::one()));
        let e_inv = exp(&int(-1), Precision::default());
        let e_val = e(Precision::default());
        let product = e_inv.mul(&e_val);
        assert!(product.contains(&Rational::one()));
        assert!(tight(&e_inv));
    }

    #[test]
    fn exp_of_large_argument() {
        // e^10 = 22026.465794806716516957900645...
        let iv = exp(&int(10), Precision::default());
        let lo = ratio(22_026_465_794_806_716, 1_000_000_000_000);
        let hi = ratio(22_026_465_794_806_717, 1_000_000_000_000);
        assert!(*iv.lo() >= lo && *iv.hi() <= hi, "{iv}");
    }

    #[test]
    fn ln_inverts_exp() {
        for q in [ratio(1, 2), ratio(2, 3), ratio(19, 20), ratio(3, 1), ratio(1, 1000)] {
            let l = ln(&q, Precision::default()).unwrap();
            assert!(tight(&l), "{q} {l}");
            let back = exp_interval(&l, Precision::default());
            assert!(back.contains(&q), "{q} {back}");
        }
        assert!(ln(&int(0), Precision::default()).is_err());
        assert_eq!(ln(&int(1), Precision::default()).unwrap(), Interval::point(int(0)));
    }

    #[test]
    fn ln_two_digits() {
        // ln 2 = 0.693147180559945309417232121458...
        let iv = ln(&int(2), Precision::default()).unwrap();
        let lo = ratio(693_147_180_559_945_309, 1_000_000_000_000_000_000);
        let hi = ratio(693_147_180_559_945_310, 1_000_000_000_000_000_000);
        assert!(*iv.lo() >= lo && *iv.hi() <= hi, "{iv}");
    }

    #[test]
    fn integer_power_agrees_with_exact() {
        let base = ratio(19, 20);
        let exact = num::pow(base.clone(), 13);
        let iv = pow(&base, &int(13), Precision::default()).unwrap();
        assert!(iv.contains(&exact));
        assert!(tight(&iv));
    }

    #[test]
    fn comparisons() {
        let iv = Interval::new(ratio(1, 3), ratio(1, 2)).unwrap();
        assert_eq!(iv.compare(&int(1)).unwrap(), Ordering::Less);
        assert_eq!(iv.compare(&int(0)).unwrap(), Ordering::Greater);
        assert!(matches!(iv.compare(&ratio(2, 5)), Err(Error::Indeterminate(_))));
        let other = Interval::new(ratio(3, 5), ratio(4, 5)).unwrap();
        assert!(iv.certainly_less(&other).unwrap());
        assert!(!other.certainly_less(&iv).unwrap());
        assert!(Interval::new(int(1), int(0)).is_err());
    }
}
