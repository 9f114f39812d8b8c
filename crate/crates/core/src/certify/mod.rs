//! Exhaustive (finite) or grid-sampled (interval) certification of the five
//! rational-type contraction conditions.

mod coeffs;

pub use coeffs::{Coeff, SevenCoeffs, T2Coeffs, T3Coeffs};

use serde::{Deserialize, Serialize};

use crate::corder::{check_nondecreasing, PointOrder};
use crate::gcore::{GSpace, GValue, Scalar, SelfMap};
use crate::{Error, Result};

/// Maximum number of violation records kept in a certificate.
pub const VIOLATION_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(TheoremId::T1),
            "t2" => Ok(TheoremId::T2),
            "t3" => Ok(TheoremId::T3),
            "t4" => Ok(TheoremId::T4),
            "t5" => Ok(TheoremId::T5),
            _ => Err(Error::Argument(format!("unknown theorem {s:?}, expected t1..t5"))),
        }
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A contraction condition together with its coefficients.
#[derive(Clone, Debug)]
pub enum Condition<P> {
    /// Single ratio of image-mixed distances over displacements plus one.
    T1,
    T2(T2Coeffs),
    T3(T3Coeffs<P>),
    T4(SevenCoeffs<P>),
    /// Seven-term condition under the cone order, on ordered triples only.
    T5(SevenCoeffs<P>),
}

impl<P> Condition<P> {
    pub fn id(&self) -> TheoremId {
        match self {
            Condition::T1 => TheoremId::T1,
            Condition::T2(_) => TheoremId::T2,
            Condition::T3(_) => TheoremId::T3,
            Condition::T4(_) => TheoremId::T4,
            Condition::T5(_) => TheoremId::T5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// `lhs ⪯ rhs` fails while `rhs ⪯ lhs` holds (the real case).
    Exceeds,
    /// The two sides, or the arguments of a required minimum, are
    /// incomparable under the cone order.
    Incomparable,
}

/// Both sides of a condition at one triple. `rhs` is `None` when it cannot
/// be formed because a minimum is taken over incomparable values.
#[derive(Clone, Debug, PartialEq)]
pub struct Sides<S> {
    pub lhs: GValue<S>,
    pub rhs: Option<GValue<S>>,
}

impl<S: Scalar> Sides<S> {
    pub fn verdict(&self) -> Option<ViolationKind> {
        match &self.rhs {
            None => Some(ViolationKind::Incomparable),
            Some(rhs) if self.lhs.cone_le(rhs) => None,
            Some(rhs) if rhs.cone_le(&self.lhs) => Some(ViolationKind::Exceeds),
            Some(_) => Some(ViolationKind::Incomparable),
        }
    }

    pub fn slack(&self) -> Option<GValue<S>> {
        self.rhs.clone().map(|r| r - self.lhs.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TripleRecord<S: Scalar> {
    /// Positions in the checked carrier.
    pub triple: [usize; 3],
    pub points: [String; 3],
    pub lhs: GValue<S>,
    pub rhs: Option<GValue<S>>,
    pub slack: Option<GValue<S>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<ViolationKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Certificate<S: Scalar> {
    pub theorem: TheoremId,
    pub holds: bool,
    pub triples_checked: usize,
    /// Present for grid-sampled certification of interval spaces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Triple of minimal slack `rhs − lhs`, first in lexicographic order on ties.
    pub worst: Option<TripleRecord<S>>,
    pub violations: Vec<TripleRecord<S>>,
    pub violation_count: usize,
}

fn min_of<S: Scalar>(u: GValue<S>, v: GValue<S>) -> Option<GValue<S>> {
    u.cone_min(&v)
}

/// Evaluates both sides of `cond` at `(x, y, z)` given the images
/// `(tx, ty, tz)`. Coefficient admissibility is not checked here.
#[allow(clippy::too_many_arguments)]
pub fn sides<Sp: GSpace>(
    cond: &Condition<Sp::Point>,
    space: &Sp,
    x: &Sp::Point,
    y: &Sp::Point,
    z: &Sp::Point,
    tx: &Sp::Point,
    ty: &Sp::Point,
    tz: &Sp::Point,
) -> Sides<Sp::Scalar> {
    type V<S> = GValue<S>;
    let g = |a: &Sp::Point, b: &Sp::Point, c: &Sp::Point| space.g(a, b, c);
    let k = |r: &crate::gcore::Rational| V::<Sp::Scalar>::from_rational(r);
    let one = V::<Sp::Scalar>::one();

    let lhs = g(tx, ty, tz);
    let gxyz = g(x, y, z);
    let rhs = match cond {
        Condition::T1 => {
            let num = g(tx, y, z) + g(x, ty, z) + g(x, y, tz);
            let den = g(x, tx, tx) + g(y, ty, ty) + g(z, tz, tz) + one;
            Some(num / den * gxyz)
        }
        Condition::T2(c) => {
            let linear = k(&c.beta) * gxyz.clone();
            if num::Zero::is_zero(&c.alpha) {
                Some(linear)
            } else {
                min_of(g(y, ty, ty), g(z, tz, tz)).map(|m| {
                    k(&c.alpha) * (m * (one.clone() + g(x, tx, tx)) / (one + gxyz)) + linear
                })
            }
        }
        Condition::T3(c) => {
            let a = c.values_at(x, y, z);
            let shared = (one.clone() + g(x, tx, tx)) / (one + gxyz.clone());
            Some(
                k(&a[0]) * (g(y, ty, ty) * shared.clone())
                    + k(&a[1]) * (g(z, tz, tz) * shared)
                    + k(&a[2]) * gxyz,
            )
        }
        Condition::T4(c) | Condition::T5(c) => {
            let a = c.values_at(x, y, z);
            let gxtx = g(x, tx, tx);
            let gtxyz = g(tx, y, z);
            let gxtyz = g(x, ty, z);
            let gxytz = g(x, y, tz);
            let inv = one.clone() + gxyz.clone();
            let mut total = k(&a[0]) * gxyz.clone()
                + k(&a[1]) * (gxtx.clone() + g(y, ty, ty) + g(z, tz, tz))
                + k(&a[2]) * (gtxyz.clone() + gxtyz.clone() + gxytz.clone())
                + k(&a[4]) * (gtxyz.clone() * (one.clone() + gxtyz + gxytz) / inv.clone())
                + k(&a[5]) * (gxyz * (one.clone() + gxtx.clone() + gtxyz.clone()) / inv.clone())
                + k(&a[6]) * gtxyz;
            if num::Zero::is_zero(&a[3]) {
                Some(total)
            } else {
                min_of(g(y, ty, ty), g(z, tz, tz)).map(|m| {
                    total = total.clone() + k(&a[3]) * (m * (one + gxtx) / inv);
                    total
                })
            }
        }
    };
    Sides { lhs, rhs }
}

fn check_coeffs<Sp: GSpace>(
    cond: &Condition<Sp::Point>,
    space: &Sp,
    x: &Sp::Point,
    y: &Sp::Point,
    z: &Sp::Point,
) -> Result<()> {
    let at = || format!("({}, {}, {})", space.label(x), space.label(y), space.label(z));
    match cond {
        Condition::T1 | Condition::T2(_) => Ok(()),
        Condition::T3(c) => c.check_at(&c.values_at(x, y, z), &at()),
        Condition::T4(c) | Condition::T5(c) => c.check_at(&c.values_at(x, y, z), &at()),
    }
}

/// Images of the carrier points; fails if the map leaves the carrier.
pub fn images<Sp: GSpace, M: SelfMap<Sp::Point>>(space: &Sp, map: &M) -> Result<Vec<Sp::Point>> {
    space
        .carrier()
        .iter()
        .map(|p| {
            let q = map.apply(p)?;
            if space.contains(&q) {
                Ok(q)
            } else {
                Err(Error::Domain(format!(
                    "not a self-map: {} maps outside the space",
                    space.label(p)
                )))
            }
        })
        .collect()
}

/// Checks `cond` at every ordered carrier triple accepted by `filter`.
pub fn certify_filtered<Sp, M, F>(
    space: &Sp,
    map: &M,
    cond: &Condition<Sp::Point>,
    filter: F,
) -> Result<Certificate<Sp::Scalar>>
where
    Sp: GSpace,
    M: SelfMap<Sp::Point>,
    F: Fn(&Sp::Point, &Sp::Point, &Sp::Point) -> bool,
{
    if let Condition::T2(c) = cond {
        c.validate()?;
    }
    let pts = space.carrier();
    let imgs = images(space, map)?;
    let n = pts.len();

    let mut checked = 0;
    let mut worst: Option<(Sp::Scalar, TripleRecord<Sp::Scalar>)> = None;
    let mut violations = Vec::new();
    let mut violation_count = 0;

    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let (x, y, z) = (&pts[i], &pts[j], &pts[l]);
                if !filter(x, y, z) {
                    continue;
                }
                check_coeffs(cond, space, x, y, z)?;
                let s = sides(cond, space, x, y, z, &imgs[i], &imgs[j], &imgs[l]);
                checked += 1;
                let kind = s.verdict();
                let slack = s.slack();
                let record = || TripleRecord {
                    triple: [i, j, l],
                    points: [space.label(x), space.label(y), space.label(z)],
                    lhs: s.lhs.clone(),
                    rhs: s.rhs.clone(),
                    slack: slack.clone(),
                    kind,
                };
                if let Some(sl) = &slack {
                    let key = sl.rank_key();
                    if worst.as_ref().is_none_or(|(w, _)| key < *w) {
                        worst = Some((key, record()));
                    }
                }
                if kind.is_some() {
                    violation_count += 1;
                    if violations.len() < VIOLATION_CAP {
                        violations.push(record());
                    }
                }
            }
        }
    }

    Ok(Certificate {
        theorem: cond.id(),
        holds: violation_count == 0,
        triples_checked: checked,
        grid: space.grid(),
        worst: worst.map(|(_, r)| {
            let mut r = r;
            r.kind = None;
            r
        }),
        violations,
        violation_count,
    })
}

pub fn certify_t1<Sp: GSpace, M: SelfMap<Sp::Point>>(
    space: &Sp,
    map: &M,
) -> Result<Certificate<Sp::Scalar>> {
    certify_filtered(space, map, &Condition::T1, |_, _, _| true)
}

pub fn certify_t2<Sp: GSpace, M: SelfMap<Sp::Point>>(
    space: &Sp,
    map: &M,
    coeffs: &T2Coeffs,
) -> Result<Certificate<Sp::Scalar>> {
    certify_filtered(space, map, &Condition::T2(coeffs.clone()), |_, _, _| true)
}

pub fn certify_t3<Sp: GSpace, M: SelfMap<Sp::Point>>(
    space: &Sp,
    map: &M,
    coeffs: &T3Coeffs<Sp::Point>,
) -> Result<Certificate<Sp::Scalar>> {
    certify_filtered(space, map, &Condition::T3(coeffs.clone()), |_, _, _| true)
}

pub fn certify_t4<Sp: GSpace, M: SelfMap<Sp::Point>>(
    space: &Sp,
    map: &M,
    coeffs: &SevenCoeffs<Sp::Point>,
) -> Result<Certificate<Sp::Scalar>> {
    certify_filtered(space, map, &Condition::T4(coeffs.clone()), |_, _, _| true)
}

/// Seven-term condition on triples `x ⪯ y ⪯ z`. The map must be
/// nondecreasing; otherwise the hypothesis fails and nothing is certified.
pub fn certify_t5<Sp, M, O>(
    space: &Sp,
    order: &O,
    map: &M,
    coeffs: &SevenCoeffs<Sp::Point>,
) -> Result<Certificate<Sp::Scalar>>
where
    Sp: GSpace,
    M: SelfMap<Sp::Point>,
    O: PointOrder<Sp::Point>,
{
    let mono = check_nondecreasing(space, order, map)?;
    if let Some(w) = mono.witness {
        return Err(Error::Hypothesis(format!(
            "map is not nondecreasing: {} ⪯ {} but T{} = {} is not ⪯ T{} = {}",
            w.x, w.y, w.x, w.tx, w.y, w.ty
        )));
    }
    certify_filtered(space, map, &Condition::T5(coeffs.clone()), |x, y, z| {
        order.leq(x, y) && order.leq(y, z)
    })
}

/// Dispatches on a condition; `order` is required for [`Condition::T5`].
pub fn certify<Sp, M, O>(
    space: &Sp,
    map: &M,
    cond: &Condition<Sp::Point>,
    order: Option<&O>,
) -> Result<Certificate<Sp::Scalar>>
where
    Sp: GSpace,
    M: SelfMap<Sp::Point>,
    O: PointOrder<Sp::Point>,
{
    match cond {
        Condition::T5(c) => {
            let order = order.ok_or_else(|| Error::Argument("T5 needs a point order".into()))?;
            certify_t5(space, order, map, c)
        }
        _ => certify_filtered(space, map, cond, |_, _, _| true),
    }
}

/// Both sides of `cond` at one carrier triple, by carrier position.
pub fn evaluate_at<Sp: GSpace, M: SelfMap<Sp::Point>>(
    space: &Sp,
    map: &M,
    cond: &Condition<Sp::Point>,
    triple: [&Sp::Point; 3],
) -> Result<Sides<Sp::Scalar>> {
    let [x, y, z] = triple;
    for p in triple {
        space.require(p)?;
    }
    let (tx, ty, tz) = (map.apply(x)?, map.apply(y)?, map.apply(z)?);
    Ok(sides(cond, space, x, y, z, &tx, &ty, &tz))
}
