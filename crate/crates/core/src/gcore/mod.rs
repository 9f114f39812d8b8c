//! G-metric data model: spaces, values, self-maps, axioms and convergence.

pub mod axioms;
pub mod convergence;
pub mod finite;
pub mod interval;
pub mod map;
pub mod scalar;
pub mod space;
pub mod value;

pub use axioms::{check_axioms, AxiomReport, AxiomStatus, Witness};
pub use convergence::{converges_to, converges_to_dg, is_g_cauchy, DEFAULT_TAIL};
pub use finite::{multisets, numbered_points, triple_key, FiniteGSpace};
pub use interval::{IntervalGSpace, MetricKind, DEFAULT_GRID};
pub use map::{FiniteMap, Piece, PiecewiseMap};
pub use scalar::{parse_rational, parse_real, rat, Rational, Scalar};
pub use space::{GSpace, SelfMap};
pub use value::GValue;
