use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::scalar::{Rational, Scalar};

/// A G-value `re + im·i`. Real-valued spaces keep `im = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GValue<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> GValue<S> {
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }

    pub fn real(re: S) -> Self {
        Self { re, im: S::zero() }
    }

    /// `g·(1+i)`, the scaling used by the complex interval family.
    pub fn unit_complex(g: S) -> Self {
        Self { re: g.clone(), im: g }
    }

    pub fn zero() -> Self {
        Self::real(S::zero())
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::real(S::from_rational(r))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    /// Cone order: `self ⪯ other` iff both components are `<=`.
    pub fn cone_le(&self, other: &Self) -> bool {
        self.re.le_tol(&other.re) && self.im.le_tol(&other.im)
    }

    /// Lies in the closed nonnegative cone.
    pub fn is_nonnegative(&self) -> bool {
        !self.re.is_negative() && !self.im.is_negative()
    }

    /// Smaller of two values under the cone order, `None` if incomparable.
    pub fn cone_min(&self, other: &Self) -> Option<Self> {
        if self.cone_le(other) {
            Some(self.clone())
        } else if other.cone_le(self) {
            Some(other.clone())
        } else {
            None
        }
    }

    /// Scalar ranking key for witness selection: the real part for real
    /// values, the smaller component otherwise.
    pub fn rank_key(&self) -> S {
        if self.is_real() || self.re <= self.im {
            self.re.clone()
        } else {
            self.im.clone()
        }
    }

    pub fn modulus_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn render(&self) -> String {
        if self.is_real() {
            self.re.render()
        } else {
            format!("{}+{}i", self.re.render(), self.im.render())
        }
    }
}

impl<S: Scalar> Add for GValue<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<S: Scalar> Sub for GValue<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<S: Scalar> Mul for GValue<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_real() && rhs.is_real() {
            return Self::real(self.re * rhs.re);
        }
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Self::new(re, im)
    }
}

impl<S: Scalar> Div for GValue<S> {
    type Output = Self;
    /// Callers guarantee a nonzero divisor (every divisor here is `1 + G` or
    /// similar).
    fn div(self, rhs: Self) -> Self {
        if rhs.is_real() {
            return Self::new(self.re / rhs.re.clone(), self.im / rhs.re);
        }
        let den = rhs.re.clone() * rhs.re.clone() + rhs.im.clone() * rhs.im.clone();
        let re = self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone();
        let im = self.im * rhs.re - self.re * rhs.im;
        Self::new(re / den.clone(), im / den)
    }
}

impl<S: Scalar> fmt::Display for GValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<S: Scalar> Serialize for GValue<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        if self.is_real() {
            serializer.serialize_str(&self.re.render())
        } else {
            let mut st = serializer.serialize_struct("GValue", 2)?;
            st.serialize_field("re", &self.re.render())?;
            st.serialize_field("im", &self.im.render())?;
            st.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcore::scalar::rat;

    fn c(re: i64, im: i64) -> GValue<Rational> {
        GValue::new(rat(re, 1), rat(im, 1))
    }

    #[test]
    fn complex_product_and_quotient_are_exact() {
        // (1+i)(1+i) = 2i
        assert_eq!(c(1, 1) * c(1, 1), c(0, 2));
        // (3+4i)/(1+2i) = (3+8 + (4-6)i)/5 = 11/5 - 2/5 i
        let q = c(3, 4) / c(1, 2);
        assert_eq!(q, GValue::new(rat(11, 5), rat(-2, 5)));
        assert_eq!(q * c(1, 2), c(3, 4));
    }

    #[test]
    fn cone_min_needs_comparability() {
        assert_eq!(c(1, 1).cone_min(&c(2, 3)), Some(c(1, 1)));
        assert_eq!(c(1, 3).cone_min(&c(2, 1)), None);
    }

    #[test]
    fn serializes_real_values_as_plain_strings() {
        let v = GValue::real(rat(285, 14));
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"285/14\"");
        let z = c(1, 2);
        assert_eq!(serde_json::to_string(&z).unwrap(), r#"{"re":"1","im":"2"}"#);
    }
}
