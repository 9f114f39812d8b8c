use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::FLOAT_TOL;

/// Exact rational with arbitrary-precision numerator and denominator, always
/// kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a reduced rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Parses either a rational literal or a decimal number into an `f64`.
pub fn parse_real(s: &str) -> Option<f64> {
    if let Some(r) = parse_rational(s) {
        return ToPrimitive::to_f64(&r);
    }
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Serde helpers writing rationals as `"p/q"` strings.
pub mod rational_text {
    use serde::Serializer;

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn serialize_opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&r.to_string()),
            None => s.serialize_none(),
        }
    }
}

/// Ordered field used for G-values: exact rationals for finite spaces,
/// `f64` for interval spaces.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    /// `self <= other`, up to [`FLOAT_TOL`] for inexact scalars.
    fn le_tol(&self, other: &Self) -> bool;
    /// Text form used in reports; rationals print as `p/q` or `p`.
    fn render(&self) -> String;
    fn is_exact() -> bool;

    fn is_negative(&self) -> bool {
        !Self::zero().le_tol(self)
    }

    fn lt_tol(&self, other: &Self) -> bool {
        !other.le_tol(self)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn le_tol(&self, other: &Self) -> bool {
        self <= other
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn is_exact() -> bool {
        true
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn le_tol(&self, other: &Self) -> bool {
        *self <= *other + FLOAT_TOL
    }
    fn render(&self) -> String {
        format!("{self}")
    }
    fn is_exact() -> bool {
        false
    }
}
