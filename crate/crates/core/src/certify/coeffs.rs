use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::gcore::{rat, Rational};
use crate::{Error, Result};

pub type CoeffFn<P> = Arc<dyn Fn(&P, &P, &P) -> Rational + Send + Sync>;

/// Coefficient `a_i(x,y,z)`: a constant or an arbitrary nonnegative function
/// of the triple.
pub enum Coeff<P> {
    Const(Rational),
    Func(CoeffFn<P>),
}

impl<P> Clone for Coeff<P> {
    fn clone(&self) -> Self {
        match self {
            Coeff::Const(r) => Coeff::Const(r.clone()),
            Coeff::Func(f) => Coeff::Func(Arc::clone(f)),
        }
    }
}

impl<P> fmt::Debug for Coeff<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Const(r) => write!(f, "Const({r})"),
            Coeff::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl<P> Coeff<P> {
    pub fn zero() -> Self {
        Coeff::Const(Rational::zero())
    }

    pub fn func(f: impl Fn(&P, &P, &P) -> Rational + Send + Sync + 'static) -> Self {
        Coeff::Func(Arc::new(f))
    }

    pub fn at(&self, x: &P, y: &P, z: &P) -> Rational {
        match self {
            Coeff::Const(r) => r.clone(),
            Coeff::Func(f) => f(x, y, z),
        }
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Coeff::Const(r) => Some(r),
            Coeff::Func(_) => None,
        }
    }
}

impl<P> From<Rational> for Coeff<P> {
    fn from(r: Rational) -> Self {
        Coeff::Const(r)
    }
}

/// `(α, β)` for the single-min condition; admissible iff both are
/// nonnegative and `α + β < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct T2Coeffs {
    pub alpha: Rational,
    pub beta: Rational,
}

impl T2Coeffs {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        let c = Self { alpha, beta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_negative() || self.beta.is_negative() {
            return Err(Error::Coefficient(format!(
                "alpha = {} and beta = {} must be nonnegative",
                self.alpha, self.beta
            )));
        }
        if self.alpha.clone() + self.beta.clone() >= Rational::one() {
            return Err(Error::Coefficient(format!(
                "alpha + beta = {} must be < 1",
                self.alpha.clone() + self.beta.clone()
            )));
        }
        Ok(())
    }

    /// `β / (1 − α)`.
    pub fn rate_bound(&self) -> Rational {
        self.beta.clone() / (Rational::one() - self.alpha.clone())
    }
}

/// `λ₁` must lie in `(0, 1)` when given; when absent the weighted sum only
/// has to stay strictly below 1.
fn check_weighted_sum(sum: &Rational, lambda1: Option<&Rational>, what: &str, at: &str) -> Result<()> {
    match lambda1 {
        Some(l) => {
            if l <= &Rational::zero() || l >= &Rational::one() {
                return Err(Error::Coefficient(format!("lambda1 = {l} must lie in (0, 1)")));
            }
            if sum > l {
                return Err(Error::Coefficient(format!(
                    "{what} = {sum} exceeds lambda1 = {l} at {at}"
                )));
            }
        }
        None => {
            if sum >= &Rational::one() {
                return Err(Error::Coefficient(format!("{what} = {sum} must be < 1 at {at}")));
            }
        }
    }
    Ok(())
}

fn check_nonneg(vals: &[Rational], at: &str) -> Result<()> {
    if let Some((i, v)) = vals.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(Error::Coefficient(format!("a{} = {v} is negative at {at}", i + 1)));
    }
    Ok(())
}

/// `a1..a3` for the two-ratio condition, with `a1 + a2 + a3 ≤ λ₁ < 1`.
#[derive(Clone, Debug)]
pub struct T3Coeffs<P> {
    pub a: [Coeff<P>; 3],
    pub lambda1: Option<Rational>,
}

impl<P> T3Coeffs<P> {
    pub fn constant(a: [Rational; 3], lambda1: Option<Rational>) -> Self {
        Self {
            a: a.map(Coeff::Const),
            lambda1,
        }
    }

    pub fn values_at(&self, x: &P, y: &P, z: &P) -> [Rational; 3] {
        [self.a[0].at(x, y, z), self.a[1].at(x, y, z), self.a[2].at(x, y, z)]
    }

    pub fn check_at(&self, vals: &[Rational; 3], at: &str) -> Result<()> {
        check_nonneg(vals, at)?;
        let sum = vals[0].clone() + vals[1].clone() + vals[2].clone();
        check_weighted_sum(&sum, self.lambda1.as_ref(), "a1+a2+a3", at)
    }
}

/// `a1..a7` for the seven-term condition, with
/// `a1 + 3a2 + 4a3 + a4 + a6 ≤ λ₁ < 1`; `a5` and `a7` are only required to be
/// nonnegative.
#[derive(Clone, Debug)]
pub struct SevenCoeffs<P> {
    pub a: [Coeff<P>; 7],
    pub lambda1: Option<Rational>,
}

impl<P> SevenCoeffs<P> {
    pub fn constant(a: [Rational; 7], lambda1: Option<Rational>) -> Self {
        Self {
            a: a.map(Coeff::Const),
            lambda1,
        }
    }

    pub fn zeros() -> Self {
        Self::constant(std::array::from_fn(|_| Rational::zero()), None)
    }

    pub fn values_at(&self, x: &P, y: &P, z: &P) -> [Rational; 7] {
        std::array::from_fn(|i| self.a[i].at(x, y, z))
    }

    pub fn weighted_sum(vals: &[Rational; 7]) -> Rational {
        vals[0].clone()
            + rat(3, 1) * vals[1].clone()
            + rat(4, 1) * vals[2].clone()
            + vals[3].clone()
            + vals[5].clone()
    }

    pub fn check_at(&self, vals: &[Rational; 7], at: &str) -> Result<()> {
        check_nonneg(vals, at)?;
        check_weighted_sum(&Self::weighted_sum(vals), self.lambda1.as_ref(), "a1+3a2+4a3+a4+a6", at)
    }

    fn constants(&self) -> Option<[Rational; 7]> {
        let mut out: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
        for (o, a) in out.iter_mut().zip(&self.a) {
            *o = a.as_const()?.clone();
        }
        Some(out)
    }

    /// `(a1+a2+2a3+a6) / (1−(2a2+2a3+a4))` for constant coefficients with a
    /// positive denominator.
    pub fn rate_bound(&self) -> Option<Rational> {
        let a = self.constants()?;
        let two = rat(2, 1);
        let num = a[0].clone() + a[1].clone() + two.clone() * a[2].clone() + a[5].clone();
        let den = Rational::one() - (two.clone() * a[1].clone() + two * a[2].clone() + a[3].clone());
        (den > Rational::zero()).then(|| num / den)
    }

    /// `2a2 + 2a3 + a4`, the factor in the final step of the ordered-space
    /// argument, for constant coefficients.
    pub fn residual_factor(&self) -> Option<Rational> {
        let a = self.constants()?;
        Some(rat(2, 1) * a[1].clone() + rat(2, 1) * a[2].clone() + a[3].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t2_admissibility() {
        assert!(T2Coeffs::new(rat(1, 4), rat(1, 4)).is_ok());
        assert!(matches!(T2Coeffs::new(rat(1, 2), rat(1, 2)), Err(Error::Coefficient(_))));
        assert!(matches!(T2Coeffs::new(rat(-1, 2), rat(1, 2)), Err(Error::Coefficient(_))));
        assert_eq!(T2Coeffs::new(rat(1, 4), rat(1, 2)).unwrap().rate_bound(), rat(2, 3));
    }

    #[test]
    fn seven_term_bounds() {
        let c = SevenCoeffs::<usize>::constant(
            [rat(1, 10), rat(1, 20), rat(1, 40), rat(1, 10), rat(5, 1), rat(1, 10), rat(3, 1)],
            Some(rat(99, 100)),
        );
        let v = c.values_at(&0, &0, &0);
        // 1/10 + 3/20 + 4/40 + 1/10 + 1/10 = 11/20
        assert_eq!(SevenCoeffs::<usize>::weighted_sum(&v), rat(11, 20));
        assert!(c.check_at(&v, "test").is_ok());
        // (1/10 + 1/20 + 1/20 + 1/10) / (1 - (1/10 + 1/20 + 1/10)) = (3/10)/(3/4) = 2/5
        assert_eq!(c.rate_bound(), Some(rat(2, 5)));
        assert_eq!(c.residual_factor(), Some(rat(1, 4)));
    }

    #[test]
    fn lambda_bounds_are_enforced() {
        let c = T3Coeffs::<usize>::constant([rat(1, 2), rat(1, 4), rat(1, 8)], Some(rat(3, 4)));
        let v = c.values_at(&0, &0, &0);
        assert!(matches!(c.check_at(&v, "(0,0,0)"), Err(Error::Coefficient(m)) if m.contains("(0,0,0)")));
        let bad_lambda = T3Coeffs::<usize>::constant([rat(0, 1), rat(0, 1), rat(0, 1)], Some(rat(1, 1)));
        assert!(bad_lambda.check_at(&bad_lambda.values_at(&0, &0, &0), "t").is_err());
    }

    #[test]
    fn function_coefficients_have_no_closed_form_bound() {
        let mut c = SevenCoeffs::<usize>::zeros();
        c.a[0] = Coeff::func(|x, _, _| rat(*x as i64, 10));
        assert_eq!(c.rate_bound(), None);
        assert_eq!(c.values_at(&3, &0, &0)[0], rat(3, 10));
    }
}
