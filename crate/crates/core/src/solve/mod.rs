//! Picard iteration and the checks applied to its output: fixed points,
//! separation of distinct fixed points, orbit structure, observed rates and
//! the monotonicity of the `α_n` ratios.

use std::collections::HashMap;

use serde::Serialize;

use crate::certify::{SevenCoeffs, T2Coeffs};
use crate::gcore::convergence::below;
use crate::gcore::scalar::rational_text;
use crate::gcore::{rat, FiniteGSpace, GSpace, GValue, Rational, Scalar, SelfMap};
use crate::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_EPS_INTERVAL: f64 = 1e-9;
/// Number of trailing ratios used by the observed-rate estimate.
pub const RATE_WINDOW: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    Converged,
    MaxIter,
    CycleDetected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// Index in `points` of the first visit to the repeated point.
    pub start: usize,
    pub length: usize,
}

/// Picard sequence `x_{n+1} = T x_n` with its diagnostics.
///
/// `d[n] = G(x_n, x_{n+1}, x_{n+1})` and
/// `alpha[n-1] = (2d_{n-1} + 2d_n) / (d_{n-1} + 2d_n + 1)` for `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace<P, S> {
    pub points: Vec<P>,
    pub d: Vec<GValue<S>>,
    pub alpha: Vec<GValue<S>>,
    pub terminated: Termination,
    pub limit: Option<P>,
    /// `G(limit, T limit, T limit)`, set whenever a limit is.
    pub residual: Option<GValue<S>>,
    pub cycle: Option<Cycle>,
}

/// `(2a + 2b) / (a + 2b + 1)`.
pub fn alpha_of<S: Scalar>(prev: &GValue<S>, cur: &GValue<S>) -> GValue<S> {
    let two = GValue::<S>::real(S::one() + S::one());
    let num = two.clone() * prev.clone() + two.clone() * cur.clone();
    let den = prev.clone() + two * cur.clone() + GValue::one();
    num / den
}

pub fn alpha_sequence<S: Scalar>(d: &[GValue<S>]) -> Vec<GValue<S>> {
    d.windows(2).map(|w| alpha_of(&w[0], &w[1])).collect()
}

/// Iterates `T` from `x0` until `d_n` drops below `eps` (or is exactly
/// zero), a point repeats on a finite carrier, or `max_iter` steps pass.
/// Non-convergence is a verdict, not an error.
pub fn iterate<Sp: GSpace, M: SelfMap<Sp::Point>>(
    space: &Sp,
    map: &M,
    x0: Sp::Point,
    eps: &Sp::Scalar,
    max_iter: usize,
) -> Result<OrbitTrace<Sp::Point, Sp::Scalar>> {
    if max_iter == 0 {
        return Err(Error::Argument("max_iter must be at least 1".into()));
    }
    if eps.is_negative() {
        return Err(Error::Argument("eps must be nonnegative".into()));
    }
    space.require(&x0)?;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    if let Some(id) = space.point_id(&x0) {
        seen.insert(id, 0);
    }
    let mut trace = OrbitTrace {
        points: vec![x0],
        d: Vec::new(),
        alpha: Vec::new(),
        terminated: Termination::MaxIter,
        limit: None,
        residual: None,
        cycle: None,
    };
    for n in 0..max_iter {
        let x = &trace.points[n];
        let next = map.apply(x)?;
        space.require(&next)?;
        let dn = space.g(x, &next, &next);
        if let Some(prev) = trace.d.last() {
            trace.alpha.push(alpha_of(prev, &dn));
        }
        let done = dn.is_zero() || below(&dn, eps);
        trace.d.push(dn);
        trace.points.push(next.clone());
        if done {
            let tl = map.apply(&next)?;
            trace.residual = Some(space.g(&next, &tl, &tl));
            trace.limit = Some(next);
            trace.terminated = Termination::Converged;
            return Ok(trace);
        }
        if let Some(id) = space.point_id(&next) {
            if let Some(&start) = seen.get(&id) {
                trace.terminated = Termination::CycleDetected;
                trace.cycle = Some(Cycle {
                    start,
                    length: n + 1 - start,
                });
                return Ok(trace);
            }
            seen.insert(id, n + 1);
        }
    }
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TraceDoc<S: Scalar> {
    pub points: Vec<String>,
    pub d: Vec<GValue<S>>,
    pub alpha: Vec<GValue<S>>,
    pub terminated: Termination,
    pub limit: Option<String>,
    pub residual: Option<GValue<S>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Cycle>,
}

impl<P, S: Scalar> OrbitTrace<P, S> {
    pub fn to_doc<Sp: GSpace<Point = P, Scalar = S>>(&self, space: &Sp) -> TraceDoc<S> {
        TraceDoc {
            points: self.points.iter().map(|p| space.label(p)).collect(),
            d: self.d.clone(),
            alpha: self.alpha.clone(),
            terminated: self.terminated,
            limit: self.limit.as_ref().map(|p| space.label(p)),
            residual: self.residual.clone(),
            cycle: self.cycle,
        }
    }
}

/// Every `x` with `T x = x`, in carrier order.
pub fn fixed_points<M: SelfMap<usize>>(space: &FiniteGSpace, map: &M) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for p in space.carrier() {
        if map.apply(&p)? == p {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairSeparation {
    pub pair: [String; 2],
    /// `G(ξ, κ, κ)`
    pub g_xkk: GValue<Rational>,
    /// `G(ξ, ξ, κ)`
    pub g_xxk: GValue<Rational>,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub fixed_points: Vec<String>,
    /// Smallest `G(ξ, κ, κ)` over distinct pairs; absent with fewer than two.
    pub min_pairwise: Option<GValue<Rational>>,
    #[serde(serialize_with = "rational_text::serialize")]
    pub bound: Rational,
    pub bound_met: bool,
    pub pairs: Vec<PairSeparation>,
}

/// Distinct fixed points must sit at `G(ξ,κ,κ) ≥ 1/3`.
pub fn separation_check<M: SelfMap<usize>>(
    space: &FiniteGSpace,
    map: &M,
    fps: &[usize],
) -> Result<SeparationReport> {
    for p in fps {
        space.require(p)?;
        if map.apply(p)? != *p {
            return Err(Error::Argument(format!("{} is not a fixed point", space.label(p))));
        }
    }
    let bound = rat(1, 3);
    let bound_v = GValue::from_rational(&bound);
    let mut pairs = Vec::new();
    let mut min: Option<GValue<Rational>> = None;
    let mut bound_met = true;
    for (i, a) in fps.iter().enumerate() {
        for b in &fps[i + 1..] {
            if a == b {
                continue;
            }
            let g_xkk = space.g(a, b, b);
            let g_xxk = space.g(a, a, b);
            for v in [&g_xkk, &g_xxk] {
                bound_met &= bound_v.cone_le(v);
                if min.as_ref().is_none_or(|m| v.rank_key() < m.rank_key()) {
                    min = Some(v.clone());
                }
            }
            pairs.push(PairSeparation {
                pair: [space.label(a), space.label(b)],
                symmetric: g_xkk == g_xxk,
                g_xkk,
                g_xxk,
            });
        }
    }
    Ok(SeparationReport {
        fixed_points: fps.iter().map(|p| space.label(p)).collect(),
        min_pairwise: min,
        bound,
        bound_met,
        pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub start: String,
    /// Pre-periodic part, starting at `start`.
    pub tail: Vec<String>,
    /// The eventual cycle; a single point when the orbit reaches a fixed point.
    pub cycle: Vec<String>,
    pub converges: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitalContinuity {
    pub holds: bool,
    pub orbits: Vec<OrbitSummary>,
}

/// On a finite carrier a convergent subsequence of an orbit is eventually
/// constant at some cycle point `c`, and `T` applied to it is eventually
/// `T c`; the definition is checked in that form for every start and every
/// subsequential limit.
pub fn check_orbital_continuity<M: SelfMap<usize>>(
    space: &FiniteGSpace,
    map: &M,
) -> Result<OrbitalContinuity> {
    let mut orbits = Vec::new();
    let mut holds = true;
    for x in space.carrier() {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut path = vec![x];
        seen.insert(x, 0);
        let start_of_cycle = loop {
            let next = map.apply(path.last().expect("nonempty"))?;
            space.require(&next)?;
            if let Some(&k) = seen.get(&next) {
                break k;
            }
            seen.insert(next, path.len());
            path.push(next);
        };
        let cycle = &path[start_of_cycle..];
        for (k, &c) in cycle.iter().enumerate() {
            // T^{n_i} x ≡ c eventually, and the shifted subsequence follows the cycle
            let shifted_limit = cycle[(k + 1) % cycle.len()];
            holds &= map.apply(&c)? == shifted_limit;
        }
        orbits.push(OrbitSummary {
            start: space.label(&x),
            tail: path[..start_of_cycle].iter().map(|p| space.label(p)).collect(),
            cycle: cycle.iter().map(|p| space.label(p)).collect(),
            converges: cycle.len() == 1,
        });
    }
    Ok(OrbitalContinuity { holds, orbits })
}

/// Which closed-form rate bound to compare against.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum RateBound<P> {
    /// `β / (1 − α)`
    T2(T2Coeffs),
    /// `(a1+a2+2a3+a6) / (1 − (2a2+2a3+a4))`
    T4(SevenCoeffs<P>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepCheck {
    pub steps: usize,
    /// Indices `n` where `d_{n+1} ⪯ bound · d_n` failed.
    pub violations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateEstimate {
    pub observed: f64,
    /// False when fewer than three nonzero steps were available; `observed`
    /// is then 0.
    pub observed_defined: bool,
    pub ratios_used: usize,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "rational_text::serialize_opt"
    )]
    pub bound_t2: Option<Rational>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "rational_text::serialize_opt"
    )]
    pub bound_t4: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_check: Option<StepCheck>,
}

/// Geometric mean of `d_{n+1}/d_n` over the last [`RATE_WINDOW`] steps with
/// both terms nonzero, plus the per-step check against a theoretical bound
/// when one is given. The bound is reported on, never asserted.
pub fn rate_estimate<S: Scalar, P>(d: &[GValue<S>], bound: Option<&RateBound<P>>) -> RateEstimate {
    let ratios: Vec<f64> = d
        .windows(2)
        .filter(|w| !w[0].is_zero() && !w[1].is_zero())
        .map(|w| w[1].modulus_f64() / w[0].modulus_f64())
        .collect();
    let nonzero = d.iter().filter(|v| !v.is_zero()).count();
    let tail = &ratios[ratios.len().saturating_sub(RATE_WINDOW)..];
    let defined = nonzero >= 3 && !tail.is_empty();
    let observed = if defined {
        (tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64).exp()
    } else {
        0.0
    };

    let (bound_t2, bound_t4) = match bound {
        Some(RateBound::T2(c)) => (Some(c.rate_bound()), None),
        Some(RateBound::T4(c)) => (None, c.rate_bound()),
        None => (None, None),
    };
    let step_check = bound_t2.as_ref().or(bound_t4.as_ref()).map(|k| {
        let kv = GValue::<S>::from_rational(k);
        let violations = d
            .windows(2)
            .enumerate()
            .filter(|(_, w)| !w[1].cone_le(&(kv.clone() * w[0].clone())))
            .map(|(n, _)| n)
            .collect();
        StepCheck {
            steps: d.len().saturating_sub(1),
            violations,
        }
    });
    RateEstimate {
        observed,
        observed_defined: defined,
        ratios_used: if defined { tail.len() } else { 0 },
        bound_t2,
        bound_t4,
        step_check,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    pub nonincreasing: bool,
    /// First position `i` in the α list with `α[i] ⋠ α[i-1]`.
    pub first_violation: Option<usize>,
    pub alpha1_lt_1: bool,
}

/// Measures whether the `α_n` ratios are non-increasing and whether
/// `α_1 < 1`.
pub fn alpha_monotonicity<S: Scalar>(alpha: &[GValue<S>]) -> AlphaReport {
    let first_violation = (1..alpha.len()).find(|&i| !alpha[i].cone_le(&alpha[i - 1]));
    let one = GValue::<S>::one();
    let alpha1_lt_1 = alpha
        .first()
        .is_some_and(|a| a.cone_le(&one) && !one.cone_le(a));
    AlphaReport {
        nonincreasing: first_violation.is_none(),
        first_violation,
        alpha1_lt_1,
    }
}

/// Steps `n ≥ 1` where `d_n ⪯ α_n d_{n−1}` fails.
pub fn alpha_step_violations<S: Scalar>(d: &[GValue<S>], alpha: &[GValue<S>]) -> Vec<usize> {
    (1..d.len())
        .filter(|&n| !d[n].cone_le(&(alpha[n - 1].clone() * d[n - 1].clone())))
        .collect()
}
