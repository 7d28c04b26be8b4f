//! Exact rational scalars. All measure masses, partition endpoints and
//! copula values in this crate are `Rational`; floats appear only in
//! dimension solving, sampling and transport costs.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Shorthand for small literal rationals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_usize(numer: usize, denom: usize) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational representable as f64")
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Canonical `numerator/denominator` form used by all text formats,
/// with the denominator always written (`1/1`, not `1`).
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the canonical `numerator/denominator` form. The slash is
/// mandatory and the denominator must be positive.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let numer: BigInt = n.parse().ok()?;
    let denom: BigInt = d.parse().ok()?;
    if denom <= BigInt::zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

pub fn lcm_usize(a: usize, b: usize) -> usize {
    num::integer::lcm(a, b)
}
