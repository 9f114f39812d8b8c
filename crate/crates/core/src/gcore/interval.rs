use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::scalar::{Rational, Scalar};
use super::space::GSpace;
use super::value::GValue;
use crate::{Error, Result, FLOAT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    /// `max{|x-y|, |y-z|, |z-x|}`
    MaxAbsDiff,
}

/// G-metric on a closed interval `[lo, hi]`, evaluated in `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalGSpace {
    lo: Rational,
    hi: Rational,
    lo_f: f64,
    hi_f: f64,
    metric: MetricKind,
    complex_unit: bool,
    grid: usize,
}

pub const DEFAULT_GRID: usize = 64;

impl IntervalGSpace {
    pub fn new(lo: Rational, hi: Rational, complex_unit: bool, grid: usize) -> Result<Self> {
        if lo >= hi {
            return Err(Error::Structural(format!("interval needs lo < hi, got [{lo}, {hi}]")));
        }
        if grid == 0 {
            return Err(Error::Structural("grid size must be positive".into()));
        }
        Ok(Self {
            lo_f: ToPrimitive::to_f64(&lo).unwrap_or(f64::NAN),
            hi_f: ToPrimitive::to_f64(&hi).unwrap_or(f64::NAN),
            lo,
            hi,
            metric: MetricKind::MaxAbsDiff,
            complex_unit,
            grid,
        })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo_f, self.hi_f)
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    pub fn complex_unit(&self) -> bool {
        self.complex_unit
    }

    pub fn grid_size(&self) -> usize {
        self.grid
    }

    pub fn with_grid(&self, grid: usize) -> Result<Self> {
        Self::new(self.lo.clone(), self.hi.clone(), self.complex_unit, grid)
    }

    /// Exact grid coordinates `lo + i·(hi-lo)/(m-1)`.
    pub fn grid_rationals(&self) -> Vec<Rational> {
        if self.grid == 1 {
            return vec![self.lo.clone()];
        }
        let step = (self.hi.clone() - self.lo.clone()) / Rational::from_integer((self.grid - 1).into());
        (0..self.grid)
            .map(|i| self.lo.clone() + step.clone() * Rational::from_integer(i.into()))
            .collect()
    }

    /// Pulls a value that overshoots the interval by at most the float
    /// tolerance back inside; `None` if it is genuinely outside.
    pub fn snap(&self, x: f64) -> Option<f64> {
        if !x.is_finite() || x < self.lo_f - FLOAT_TOL || x > self.hi_f + FLOAT_TOL {
            None
        } else {
            Some(x.clamp(self.lo_f, self.hi_f))
        }
    }
}

impl GSpace for IntervalGSpace {
    type Point = f64;
    type Scalar = f64;

    fn g(&self, x: &f64, y: &f64, z: &f64) -> GValue<f64> {
        let v = match self.metric {
            MetricKind::MaxAbsDiff => (x - y).abs().max((y - z).abs()).max((z - x).abs()),
        };
        if self.complex_unit {
            GValue::unit_complex(v)
        } else {
            GValue::real(v)
        }
    }

    fn contains(&self, p: &f64) -> bool {
        p.is_finite() && *p >= self.lo_f - FLOAT_TOL && *p <= self.hi_f + FLOAT_TOL
    }

    fn carrier(&self) -> Vec<f64> {
        self.grid_rationals().iter().map(f64::from_rational).collect()
    }

    fn label(&self, p: &f64) -> String {
        p.render()
    }

    fn point_id(&self, _p: &f64) -> Option<usize> {
        None
    }

    fn grid(&self) -> Option<usize> {
        Some(self.grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcore::scalar::rat;
    use approx::assert_abs_diff_eq;

    #[test]
    fn max_abs_diff_on_sample_triple() {
        let s = IntervalGSpace::new(rat(3, 2), rat(2, 1), false, 64).unwrap();
        let v = s.eval_g(&1.6, &1.9, &1.8).unwrap();
        assert_abs_diff_eq!(v.re, 0.3, epsilon = 1e-12);
        assert_eq!(v.im, 0.0);
        assert!(s.eval_g(&1.6, &2.5, &1.8).is_err());
        assert_eq!(s.eval_g(&1.7, &1.7, &1.7).unwrap(), GValue::zero());
    }

    #[test]
    fn complex_unit_scales_by_one_plus_i() {
        let s = IntervalGSpace::new(rat(3, 2), rat(2, 1), true, 8).unwrap();
        let v = s.g(&1.5, &2.0, &1.75);
        assert_eq!(v, GValue::new(0.5, 0.5));
    }

    #[test]
    fn grid_hits_both_endpoints() {
        let s = IntervalGSpace::new(rat(3, 2), rat(2, 1), false, 5).unwrap();
        assert_eq!(s.carrier(), vec![1.5, 1.625, 1.75, 1.875, 2.0]);
        assert!(IntervalGSpace::new(rat(2, 1), rat(2, 1), false, 5).is_err());
    }

    #[test]
    fn permutations_agree_bit_identically() {
        let s = IntervalGSpace::new(rat(3, 2), rat(2, 1), true, 9).unwrap();
        let c = s.carrier();
        for x in &c {
            for y in &c {
                for z in &c {
                    let v = s.g(x, y, z);
                    for w in [s.g(x, z, y), s.g(y, x, z), s.g(y, z, x), s.g(z, x, y), s.g(z, y, x)] {
                        assert_eq!(w.re.to_bits(), v.re.to_bits());
                        assert_eq!(w.im.to_bits(), v.im.to_bits());
                    }
                }
            }
        }
    }
}
