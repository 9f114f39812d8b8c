//! Cone order on complex G-values, point orders on carriers, and the
//! monotone-orbit solver for ordered complex-valued spaces.
//!
//! Order convergence (for every `c ⪰ 0` the tail eventually sits below `c`)
//! is equivalent to componentwise convergence of `re` and `im`, which is how
//! convergence is decided here.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::certify::SevenCoeffs;
use crate::gcore::{GSpace, GValue, Scalar, SelfMap};
use crate::solve::{iterate, OrbitTrace, Termination};
use crate::{Error, Result};

/// `z1 ⪯ z2` iff `re(z1) ≤ re(z2)` and `im(z1) ≤ im(z2)`.
pub fn cone_leq<S: Scalar>(z1: &GValue<S>, z2: &GValue<S>) -> bool {
    z1.cone_le(z2)
}

pub fn comparable<S: Scalar>(z1: &GValue<S>, z2: &GValue<S>) -> bool {
    cone_leq(z1, z2) || cone_leq(z2, z1)
}

/// Partial order on carrier points.
pub trait PointOrder<P> {
    fn leq(&self, a: &P, b: &P) -> bool;
}

/// The usual order of the reals, for interval carriers.
#[derive(Clone, Copy, Debug, Default)]
pub struct NumericOrder;

impl PointOrder<f64> for NumericOrder {
    fn leq(&self, a: &f64, b: &f64) -> bool {
        a <= b
    }
}

/// Explicit partial order on `0..n`, stored as its reflexive-transitive
/// closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrder {
    n: usize,
    leq: Vec<bool>,
}

impl FiniteOrder {
    /// Closes `pairs` (each `(i, j)` meaning `i ⪯ j`) reflexively and
    /// transitively; a cycle through distinct points is rejected.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::Structural(format!("order pair ({i}, {j}) outside 0..{n}")));
            }
            leq[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Structural(format!(
                        "order has a cycle through points {i} and {j}"
                    )));
                }
            }
        }
        Ok(Self { n, leq })
    }

    /// Chain `0 ⪯ 1 ⪯ … ⪯ n−1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs).expect("a chain is acyclic")
    }

    /// Discrete order: only `i ⪯ i`.
    pub fn discrete(n: usize) -> Self {
        Self::from_pairs(n, &[]).expect("no pairs")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Covering-free listing of all strict pairs `i ⪯ j`, `i ≠ j`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.leq[i * self.n + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl PointOrder<usize> for FiniteOrder {
    fn leq(&self, a: &usize, b: &usize) -> bool {
        *a < self.n && *b < self.n && self.leq[a * self.n + b]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneWitness {
    pub x: String,
    pub y: String,
    pub tx: String,
    pub ty: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondecreasingReport {
    pub holds: bool,
    pub pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MonotoneWitness>,
}

/// `Tx ⪯ Ty` for every comparable carrier pair `x ⪯ y` (grid-sampled on
/// intervals); the first failing pair is the witness.
pub fn check_nondecreasing<Sp, M, O>(space: &Sp, order: &O, map: &M) -> Result<NondecreasingReport>
where
    Sp: GSpace,
    M: SelfMap<Sp::Point>,
    O: PointOrder<Sp::Point>,
{
    let pts = space.carrier();
    let imgs = crate::certify::images(space, map)?;
    let mut checked = 0;
    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate() {
            if i == j || !order.leq(x, y) {
                continue;
            }
            checked += 1;
            if !order.leq(&imgs[i], &imgs[j]) {
                return Ok(NondecreasingReport {
                    holds: false,
                    pairs_checked: checked,
                    witness: Some(MonotoneWitness {
                        x: space.label(x),
                        y: space.label(y),
                        tx: space.label(&imgs[i]),
                        ty: space.label(&imgs[j]),
                    }),
                });
            }
        }
    }
    Ok(NondecreasingReport {
        holds: true,
        pairs_checked: checked,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct T5Solution<P, S: Scalar> {
    #[serde(skip)]
    pub trace: OrbitTrace<P, S>,
    /// The orbit is `⪯`-nondecreasing at every step.
    pub monotone: bool,
    /// First `n` with `x_n ⋠ x_{n+1}`.
    pub first_break: Option<usize>,
    /// `2a2 + 2a3 + a4`, when the coefficients are constant.
    pub residual_factor: Option<String>,
    /// `G(x*,Tx*,Tx*) ⪯ (2a2+2a3+a4)·G(x*,Tx*,Tx*)` at the computed limit.
    pub limit_inequality_holds: Option<bool>,
    /// The limit satisfies `G(x*,Tx*,Tx*) < eps` in both components.
    pub fixed: bool,
}

/// Picard iteration from `x0` under the ordered-space hypotheses: the map
/// must be nondecreasing and `x0 ⪯ T x0`. A monotonicity break mid-orbit is
/// reported, not raised.
#[allow(clippy::too_many_arguments)]
pub fn solve_t5<Sp, M, O>(
    space: &Sp,
    order: &O,
    map: &M,
    coeffs: &SevenCoeffs<Sp::Point>,
    x0: Sp::Point,
    eps: &Sp::Scalar,
    max_iter: usize,
) -> Result<T5Solution<Sp::Point, Sp::Scalar>>
where
    Sp: GSpace,
    M: SelfMap<Sp::Point>,
    O: PointOrder<Sp::Point>,
{
    space.require(&x0)?;
    let tx0 = map.apply(&x0)?;
    if !order.leq(&x0, &tx0) {
        return Err(Error::Hypothesis(format!(
            "x0 = {} is not ⪯ T x0 = {}",
            space.label(&x0),
            space.label(&tx0)
        )));
    }
    let mono = check_nondecreasing(space, order, map)?;
    if let Some(w) = mono.witness {
        return Err(Error::Hypothesis(format!(
            "map is not nondecreasing: {} ⪯ {} but {} ⋠ {}",
            w.x, w.y, w.tx, w.ty
        )));
    }
    let trace = iterate(space, map, x0, eps, max_iter)?;
    let first_break = trace
        .points
        .windows(2)
        .position(|w| !order.leq(&w[0], &w[1]));
    let factor = coeffs.residual_factor();
    let limit_inequality_holds = trace.residual.as_ref().zip(factor.as_ref()).map(|(res, k)| {
        let scaled = GValue::<Sp::Scalar>::from_rational(k) * res.clone();
        res.cone_le(&scaled)
    });
    let fixed = trace.terminated == Termination::Converged
        && trace
            .residual
            .as_ref()
            .is_some_and(|r| r.is_zero() || crate::gcore::convergence::below(r, eps));
    Ok(T5Solution {
        monotone: first_break.is_none(),
        first_break,
        residual_factor: factor.map(|k| k.to_string()),
        limit_inequality_holds,
        fixed,
        trace,
    })
}

/// Points reachable upward from `p` (including `p`).
pub fn upper_set(order: &FiniteOrder, p: usize) -> BTreeSet<usize> {
    (0..order.len()).filter(|&q| order.leq(&p, &q)).collect()
}
