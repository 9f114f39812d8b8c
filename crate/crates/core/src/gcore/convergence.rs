//! Finite-window surrogates for G-convergence and the G-Cauchy property.
//!
//! The limit definitions are asymptotic; here a sequence is judged on its
//! final `tail` entries only.

use super::scalar::Scalar;
use super::space::GSpace;
use super::value::GValue;
use crate::{Error, Result};

pub const DEFAULT_TAIL: usize = 10;

/// Strictly inside the open cone box `[0, eps)²`.
pub fn below<S: Scalar>(v: &GValue<S>, eps: &S) -> bool {
    v.re < *eps && v.im < *eps
}

/// `G(x_n, x_m, x_m) < eps` for all `n, m` among the last `tail` entries.
pub fn is_g_cauchy<Sp: GSpace>(
    trace: &[Sp::Point],
    space: &Sp,
    eps: &Sp::Scalar,
    tail: usize,
) -> Result<bool> {
    if tail >= trace.len() {
        return Err(Error::Argument(format!(
            "tail {tail} must be shorter than the trace ({} entries)",
            trace.len()
        )));
    }
    for p in trace {
        space.require(p)?;
    }
    let window = &trace[trace.len() - tail..];
    Ok(window
        .iter()
        .all(|xn| window.iter().all(|xm| below(&space.g(xn, xm, xm), eps))))
}

fn window<P>(trace: &[P], tail: usize) -> Result<&[P]> {
    if trace.is_empty() {
        return Err(Error::Argument("empty trace".into()));
    }
    Ok(&trace[trace.len().saturating_sub(tail.max(1))..])
}

/// `G(candidate, x_n, x_n) < eps` over the final window.
pub fn converges_to<Sp: GSpace>(
    trace: &[Sp::Point],
    candidate: &Sp::Point,
    space: &Sp,
    eps: &Sp::Scalar,
    tail: usize,
) -> Result<bool> {
    space.require(candidate)?;
    for p in trace {
        space.require(p)?;
    }
    Ok(window(trace, tail)?
        .iter()
        .all(|xn| below(&space.g(candidate, xn, xn), eps)))
}

/// Same window test through the derived metric, `d_G(x_n, candidate) < eps`.
pub fn converges_to_dg<Sp: GSpace>(
    trace: &[Sp::Point],
    candidate: &Sp::Point,
    space: &Sp,
    eps: &Sp::Scalar,
    tail: usize,
) -> Result<bool> {
    space.require(candidate)?;
    for p in trace {
        space.require(p)?;
    }
    Ok(window(trace, tail)?
        .iter()
        .all(|xn| below(&space.dg(xn, candidate), eps)))
}
