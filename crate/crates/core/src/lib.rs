//! Toolkit for G-metric spaces: exact axiom checking, certification of
//! rational-type contraction conditions, Picard iteration with convergence
//! diagnostics, cone-ordered complex values, and a seeded falsification
//! harness for the fixed-point conclusions.
//!
//! Finite spaces are evaluated in exact rational arithmetic. Interval spaces
//! use `f64` with an absolute tolerance of [`FLOAT_TOL`].

pub mod certify;
pub mod corder;
pub mod corpus;
pub mod doc;
pub mod error;
pub mod expr;
pub mod gcore;
pub mod gen;
pub mod solve;

pub use error::{Error, Result};
pub use gcore::{
    FiniteGSpace, FiniteMap, GSpace, GValue, IntervalGSpace, PiecewiseMap, Rational, Scalar,
    SelfMap,
};

/// Absolute tolerance used for every floating-point comparison.
pub const FLOAT_TOL: f64 = 1e-9;
