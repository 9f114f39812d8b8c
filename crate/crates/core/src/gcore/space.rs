use std::fmt::Debug;

use super::scalar::Scalar;
use super::value::GValue;
use crate::{Error, Result};

/// A carrier with a G-function on it.
///
/// `g` may assume its arguments are carrier points; the checked entry points
/// are [`GSpace::eval_g`] and [`GSpace::derived_metric`].
pub trait GSpace {
    type Point: Clone + Debug + PartialEq;
    type Scalar: Scalar;

    fn g(&self, x: &Self::Point, y: &Self::Point, z: &Self::Point) -> GValue<Self::Scalar>;

    fn contains(&self, p: &Self::Point) -> bool;

    /// Points used by exhaustive checks: the whole carrier for finite spaces,
    /// the sampling grid for interval spaces.
    fn carrier(&self) -> Vec<Self::Point>;

    fn label(&self, p: &Self::Point) -> String;

    /// Stable small-integer identity, available on finite carriers only.
    fn point_id(&self, p: &Self::Point) -> Option<usize>;

    /// Grid size when the carrier is sampled rather than exhaustive.
    fn grid(&self) -> Option<usize> {
        None
    }

    fn eval_g(
        &self,
        x: &Self::Point,
        y: &Self::Point,
        z: &Self::Point,
    ) -> Result<GValue<Self::Scalar>> {
        for p in [x, y, z] {
            self.require(p)?;
        }
        Ok(self.g(x, y, z))
    }

    /// `d_G(x,y) = G(x,y,y) + G(x,x,y)`.
    fn derived_metric(&self, x: &Self::Point, y: &Self::Point) -> Result<GValue<Self::Scalar>> {
        self.require(x)?;
        self.require(y)?;
        Ok(self.dg(x, y))
    }

    fn dg(&self, x: &Self::Point, y: &Self::Point) -> GValue<Self::Scalar> {
        self.g(x, y, y) + self.g(x, x, y)
    }

    fn require(&self, p: &Self::Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{p:?} is not a point of the space")))
        }
    }
}

/// A self-mapping of a carrier.
pub trait SelfMap<P> {
    /// Image of `p`; fails when the image leaves the carrier.
    fn apply(&self, p: &P) -> Result<P>;
}

impl<P, F> SelfMap<P> for F
where
    F: Fn(&P) -> Result<P>,
{
    fn apply(&self, p: &P) -> Result<P> {
        self(p)
    }
}
