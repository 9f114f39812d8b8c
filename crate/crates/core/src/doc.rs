//! JSON documents for spaces, maps, coefficients and point orders.
//!
//! Rationals are written as `"p/q"` or integer strings. Every load error
//! names the JSON path of the offending value.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use crate::certify::{SevenCoeffs, T2Coeffs, T3Coeffs};
use crate::corder::FiniteOrder;
use crate::expr::{self, Expr};
use crate::gcore::{
    parse_rational, FiniteGSpace, FiniteMap, GSpace, GValue, IntervalGSpace, MetricKind, Piece,
    PiecewiseMap, Rational, DEFAULT_GRID,
};
use crate::{Error, Result};

/// A rational read from a JSON string (or integer).
#[derive(Clone, Debug, PartialEq)]
pub struct RatText(pub Rational);

impl Serialize for RatText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RatText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RatText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational such as \"15/2\" or \"6\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatText, E> {
                parse_rational(v)
                    .map(RatText)
                    .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RatText, E> {
                Ok(RatText(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RatText, E> {
                Ok(RatText(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

/// An expression read from a JSON string.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprText(pub Expr);

impl Serialize for ExprText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ExprText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        expr::parse(&s).map(ExprText).map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GText {
    Real(RatText),
    Complex { re: RatText, im: RatText },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueEntry {
    pub triple: [usize; 3],
    pub g: GText,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_metric() -> MetricKind {
    MetricKind::MaxAbsDiff
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceDoc {
    Finite {
        points: Vec<String>,
        values: Vec<ValueEntry>,
    },
    Interval {
        lo: RatText,
        hi: RatText,
        metric: MetricKind,
        complex_unit: bool,
        grid: usize,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteFields {
    points: Vec<String>,
    values: Vec<ValueEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalFields {
    lo: RatText,
    hi: RatText,
    #[serde(default = "default_metric")]
    metric: MetricKind,
    #[serde(default)]
    complex_unit: bool,
    #[serde(default = "default_grid")]
    grid: usize,
}

fn from_value<T: for<'de> Deserialize<'de>>(v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        doc_err(&path, e.into_inner())
    })
}

impl<'de> Deserialize<'de> for SpaceDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        SpaceDoc::from_value(v).map_err(de::Error::custom)
    }
}

impl SpaceDoc {
    /// Dispatches on `kind` while keeping field paths in errors.
    pub fn from_value(v: serde_json::Value) -> Result<Self> {
        let serde_json::Value::Object(mut obj) = v else {
            return Err(doc_err(".", "expected a JSON object"));
        };
        let kind = match obj.remove("kind") {
            Some(serde_json::Value::String(k)) => k,
            Some(_) => return Err(doc_err("kind", "expected a string")),
            None => return Err(doc_err("kind", "missing field `kind`")),
        };
        let rest = serde_json::Value::Object(obj);
        match kind.as_str() {
            "finite" => {
                let f: FiniteFields = from_value(rest)?;
                Ok(SpaceDoc::Finite {
                    points: f.points,
                    values: f.values,
                })
            }
            "interval" => {
                let f: IntervalFields = from_value(rest)?;
                Ok(SpaceDoc::Interval {
                    lo: f.lo,
                    hi: f.hi,
                    metric: f.metric,
                    complex_unit: f.complex_unit,
                    grid: f.grid,
                })
            }
            other => Err(doc_err(
                "kind",
                format!("unknown kind {other:?}, expected finite or interval"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub on: [RatText; 2],
    #[serde(default)]
    pub closed_right: bool,
    pub expr: ExprText,
}

/// A finite table (`targets`), a piecewise map (`pieces`), or one
/// expression on the whole interval (`expr`).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<Target>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<ExprText>,
}

/// `{"alpha","beta"}` or `{"a":[...], "lambda1"}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<RatText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<RatText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<RatText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<RatText>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderDoc {
    pub order: Vec<[usize; 2]>,
}

fn doc_err(path: &str, e: impl fmt::Display) -> Error {
    Error::Document {
        path: path.to_string(),
        msg: e.to_string(),
    }
}

/// Deserializes `text`, reporting the JSON path of any failure.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        doc_err(&path, e.into_inner())
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Finite(FiniteGSpace),
    Interval(IntervalGSpace),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedMap {
    Finite(FiniteMap),
    Piecewise(PiecewiseMap),
}

impl SpaceDoc {
    pub fn build(&self) -> Result<Space> {
        match self {
            SpaceDoc::Finite { points, values } => {
                let entries = values.iter().map(|v| {
                    let g = match &v.g {
                        GText::Real(r) => GValue::from_rational(&r.0),
                        GText::Complex { re, im } => GValue::new(re.0.clone(), im.0.clone()),
                    };
                    (v.triple, g)
                });
                FiniteGSpace::new(points.clone(), entries)
                    .map(Space::Finite)
                    .map_err(|e| doc_err("values", e))
            }
            SpaceDoc::Interval {
                lo,
                hi,
                metric: _,
                complex_unit,
                grid,
            } => IntervalGSpace::new(lo.0.clone(), hi.0.clone(), *complex_unit, *grid)
                .map(Space::Interval)
                .map_err(|e| doc_err(".", e)),
        }
    }
}

pub fn load_space(text: &str) -> Result<Space> {
    SpaceDoc::from_value(from_json(text)?)?.build()
}

/// Document form of a finite space: every off-diagonal multiset, plus any
/// nonzero diagonal entry.
pub fn finite_space_doc(space: &FiniteGSpace) -> SpaceDoc {
    let values = space
        .table()
        .iter()
        .filter(|(k, v)| k[0] != k[2] || !v.is_zero())
        .map(|(k, v)| ValueEntry {
            triple: *k,
            g: if v.is_real() {
                GText::Real(RatText(v.re.clone()))
            } else {
                GText::Complex {
                    re: RatText(v.re.clone()),
                    im: RatText(v.im.clone()),
                }
            },
        })
        .collect();
    SpaceDoc::Finite {
        points: space.points().to_vec(),
        values,
    }
}

pub fn interval_space_doc(space: &IntervalGSpace) -> SpaceDoc {
    SpaceDoc::Interval {
        lo: RatText(space.lo().clone()),
        hi: RatText(space.hi().clone()),
        metric: space.metric(),
        complex_unit: space.complex_unit(),
        grid: space.grid_size(),
    }
}

pub fn finite_map_doc(map: &FiniteMap) -> MapDoc {
    MapDoc {
        kind: Some("finite".into()),
        targets: Some(map.targets().iter().map(|&t| Target::Index(t)).collect()),
        ..MapDoc::default()
    }
}

impl MapDoc {
    pub fn bind(&self, space: &Space) -> Result<LoadedMap> {
        match space {
            Space::Finite(s) => {
                let targets = self
                    .targets
                    .as_ref()
                    .ok_or_else(|| doc_err("targets", "a finite space needs a `targets` table"))?;
                let mut idx = Vec::with_capacity(targets.len());
                for (i, t) in targets.iter().enumerate() {
                    let path = format!("targets[{i}]");
                    let j = match t {
                        Target::Index(j) => *j,
                        Target::Label(l) => s.index_of(l).map_err(|e| doc_err(&path, e))?,
                    };
                    if j >= s.len() {
                        return Err(doc_err(&path, format!("index {j} outside the space")));
                    }
                    idx.push(j);
                }
                FiniteMap::new(idx, s.len())
                    .map(LoadedMap::Finite)
                    .map_err(|e| doc_err("targets", e))
            }
            Space::Interval(s) => {
                let map = match (&self.pieces, &self.expr) {
                    (Some(pieces), None) => {
                        let pieces = pieces
                            .iter()
                            .map(|p| Piece {
                                from: p.on[0].0.clone(),
                                to: p.on[1].0.clone(),
                                closed_right: p.closed_right,
                                expr: p.expr.0.clone(),
                            })
                            .collect();
                        PiecewiseMap::new(pieces, s).map_err(|e| doc_err("pieces", e))?
                    }
                    (None, Some(e)) => {
                        PiecewiseMap::single(e.0.clone(), s).map_err(|e| doc_err("expr", e))?
                    }
                    _ => {
                        return Err(doc_err(
                            ".",
                            "an interval map needs exactly one of `pieces` or `expr`",
                        ))
                    }
                };
                map.check_on_grid().map_err(|e| doc_err("pieces", e))?;
                Ok(LoadedMap::Piecewise(map))
            }
        }
    }
}

pub fn load_map(text: &str, space: &Space) -> Result<LoadedMap> {
    from_json::<MapDoc>(text)?.bind(space)
}

impl CoeffDoc {
    pub fn t2(&self) -> Result<T2Coeffs> {
        match (&self.alpha, &self.beta) {
            (Some(a), Some(b)) => T2Coeffs::new(a.0.clone(), b.0.clone()),
            _ => Err(doc_err("alpha", "T2 coefficients need `alpha` and `beta`")),
        }
    }

    fn array<const N: usize>(&self) -> Result<[Rational; N]> {
        let a = self
            .a
            .as_ref()
            .ok_or_else(|| doc_err("a", format!("expected an array of {N} coefficients")))?;
        if a.len() != N {
            return Err(doc_err("a", format!("expected {N} coefficients, got {}", a.len())));
        }
        Ok(std::array::from_fn(|i| a[i].0.clone()))
    }

    pub fn t3<P>(&self) -> Result<T3Coeffs<P>> {
        Ok(T3Coeffs::constant(self.array::<3>()?, self.lambda1.as_ref().map(|l| l.0.clone())))
    }

    pub fn seven<P>(&self) -> Result<SevenCoeffs<P>> {
        Ok(SevenCoeffs::constant(self.array::<7>()?, self.lambda1.as_ref().map(|l| l.0.clone())))
    }
}

pub fn load_coeffs(text: &str) -> Result<CoeffDoc> {
    from_json(text)
}

pub fn load_order(text: &str, n: usize) -> Result<FiniteOrder> {
    let doc: OrderDoc = from_json(text)?;
    let pairs: Vec<(usize, usize)> = doc.order.iter().map(|p| (p[0], p[1])).collect();
    FiniteOrder::from_pairs(n, &pairs).map_err(|e| doc_err("order", e))
}

impl Space {
    pub fn label_count(&self) -> usize {
        match self {
            Space::Finite(s) => s.len(),
            Space::Interval(s) => s.carrier().len(),
        }
    }
}
