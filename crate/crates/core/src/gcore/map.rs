use num::ToPrimitive;

use super::interval::IntervalGSpace;
use super::scalar::Rational;
use super::space::SelfMap;
use crate::expr::Expr;
use crate::{Error, Result};

/// Self-map of a finite carrier as an index table: `i ↦ targets[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMap {
    targets: Vec<usize>,
}

impl FiniteMap {
    pub fn new(targets: Vec<usize>, n: usize) -> Result<Self> {
        if targets.len() != n {
            return Err(Error::Domain(format!(
                "map table has {} entries but the space has {n} points",
                targets.len()
            )));
        }
        if let Some((i, t)) = targets.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(Error::Domain(format!(
                "not a self-map: point {i} maps to index {t} outside 0..{n}"
            )));
        }
        Ok(Self { targets })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            targets: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, p: usize) -> Result<Self> {
        Self::new(vec![p; n], n)
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn at(&self, i: usize) -> usize {
        self.targets[i]
    }

    /// Conjugate by a relabelling `perm`: the map `perm ∘ T ∘ perm⁻¹`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut targets = vec![0; self.targets.len()];
        for (i, &t) in self.targets.iter().enumerate() {
            targets[perm[i]] = perm[t];
        }
        Self { targets }
    }
}

impl SelfMap<usize> for FiniteMap {
    fn apply(&self, p: &usize) -> Result<usize> {
        self.targets
            .get(*p)
            .copied()
            .ok_or_else(|| Error::Domain(format!("point index {p} outside the carrier")))
    }
}

/// One branch of a piecewise map, active on `[from, to)` or `[from, to]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub from: Rational,
    pub to: Rational,
    pub closed_right: bool,
    pub expr: Expr,
}

/// Piecewise expression map on an interval space. Pieces are contiguous,
/// cover `[lo, hi]`, and only the last one is closed on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap {
    pieces: Vec<Piece>,
    bounds: Vec<(f64, f64)>,
    space: IntervalGSpace,
}

impl PiecewiseMap {
    pub fn new(pieces: Vec<Piece>, space: &IntervalGSpace) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::Structural("piecewise map needs at least one piece".into()));
        };
        if &first.from != space.lo() {
            return Err(Error::Structural(format!(
                "first piece starts at {} but the interval starts at {}",
                first.from,
                space.lo()
            )));
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.from >= p.to {
                return Err(Error::Structural(format!("piece {i} is empty: [{}, {}]", p.from, p.to)));
            }
            let last = i + 1 == pieces.len();
            if last {
                if &p.to != space.hi() || !p.closed_right {
                    return Err(Error::Structural(format!(
                        "last piece must be closed and end at {}",
                        space.hi()
                    )));
                }
            } else {
                if p.closed_right {
                    return Err(Error::Structural(format!(
                        "piece {i} is closed on the right and overlaps piece {}",
                        i + 1
                    )));
                }
                if p.to != pieces[i + 1].from {
                    return Err(Error::Structural(format!(
                        "gap or overlap between piece {i} and piece {}",
                        i + 1
                    )));
                }
            }
        }
        let bounds = pieces
            .iter()
            .map(|p| (p.from.to_f64().unwrap_or(f64::NAN), p.to.to_f64().unwrap_or(f64::NAN)))
            .collect();
        Ok(Self {
            pieces,
            bounds,
            space: space.clone(),
        })
    }

    /// Single-expression map on the whole interval.
    pub fn single(expr: Expr, space: &IntervalGSpace) -> Result<Self> {
        Self::new(
            vec![Piece {
                from: space.lo().clone(),
                to: space.hi().clone(),
                closed_right: true,
                expr,
            }],
            space,
        )
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn piece_for(&self, x: f64) -> Option<&Piece> {
        let n = self.pieces.len();
        self.bounds.iter().zip(&self.pieces).enumerate().find_map(|(i, (&(u, v), p))| {
            let upper_ok = if i + 1 == n { x <= v } else { x < v };
            (x >= u && upper_ok).then_some(p)
        })
    }

    /// Exact image of a rational point.
    pub fn apply_rational(&self, x: &Rational) -> Result<Rational> {
        let n = self.pieces.len();
        let piece = self
            .pieces
            .iter()
            .enumerate()
            .find(|(i, p)| {
                x >= &p.from && if i + 1 == n { x <= &p.to } else { x < &p.to }
            })
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Domain(format!("{x} lies outside the interval")))?;
        let y = piece.expr.eval_rational(x)?;
        if &y < self.space.lo() || &y > self.space.hi() {
            return Err(Error::Domain(format!("not a self-map: T({x}) = {y} leaves the interval")));
        }
        Ok(y)
    }

    /// Verifies the self-map property on every grid point.
    pub fn check_on_grid(&self) -> Result<()> {
        for x in crate::gcore::GSpace::carrier(&self.space) {
            self.apply(&x)?;
        }
        Ok(())
    }
}

impl SelfMap<f64> for PiecewiseMap {
    fn apply(&self, x: &f64) -> Result<f64> {
        let (lo, hi) = self.space.bounds();
        let xs = self
            .space
            .snap(*x)
            .ok_or_else(|| Error::Domain(format!("{x} lies outside [{lo}, {hi}]")))?;
        let piece = self
            .piece_for(xs)
            .ok_or_else(|| Error::Domain(format!("no piece covers {xs}")))?;
        let y = piece.expr.eval_f64(xs)?;
        self.space
            .snap(y)
            .ok_or_else(|| Error::Domain(format!("not a self-map: T({xs}) = {y} leaves [{lo}, {hi}]")))
    }
}
