//! Built-in example instances, embedded as JSON documents.

use crate::certify::SevenCoeffs;
use crate::doc::{load_coeffs, load_map, load_space, LoadedMap, Space};
use crate::gcore::{FiniteGSpace, FiniteMap, IntervalGSpace, PiecewiseMap};

pub const EXAMPLE1_SPACE: &str = include_str!("../corpus/example1_space.json");
pub const EXAMPLE1_MAP: &str = include_str!("../corpus/example1_map.json");
pub const INTERVAL_SPACE: &str = include_str!("../corpus/interval_space.json");
pub const INTERVAL_MAP: &str = include_str!("../corpus/interval_map.json");
pub const INTERVAL_COEFFS: &str = include_str!("../corpus/interval_coeffs.json");
pub const COMPLEX_SPACE: &str = include_str!("../corpus/complex_space.json");
pub const COMPLEX_MAP: &str = include_str!("../corpus/complex_map.json");
pub const COMPLEX_COEFFS: &str = include_str!("../corpus/complex_coeffs.json");

/// Starting point used for both interval orbits.
pub const INTERVAL_X0: f64 = 1.6;

/// Three points `0, 1/2, 1` with a tabulated symmetric G.
pub fn example1_space() -> FiniteGSpace {
    match load_space(EXAMPLE1_SPACE).expect("embedded document") {
        Space::Finite(s) => s,
        Space::Interval(_) => unreachable!(),
    }
}

/// `0 ↦ 0, 1/2 ↦ 1/2, 1 ↦ 0`.
pub fn example1_map() -> FiniteMap {
    let space = Space::Finite(example1_space());
    match load_map(EXAMPLE1_MAP, &space).expect("embedded document") {
        LoadedMap::Finite(m) => m,
        LoadedMap::Piecewise(_) => unreachable!(),
    }
}

fn interval_pair(space_doc: &str, map_doc: &str) -> (IntervalGSpace, PiecewiseMap) {
    let space = load_space(space_doc).expect("embedded document");
    let map = load_map(map_doc, &space).expect("embedded document");
    match (space, map) {
        (Space::Interval(s), LoadedMap::Piecewise(m)) => (s, m),
        _ => unreachable!(),
    }
}

/// `[3/2, 2]` with `T x = x + 1/x − 1/2`.
pub fn interval_example() -> (IntervalGSpace, PiecewiseMap) {
    interval_pair(INTERVAL_SPACE, INTERVAL_MAP)
}

pub fn interval_coeffs() -> SevenCoeffs<f64> {
    load_coeffs(INTERVAL_COEFFS)
        .and_then(|c| c.seven())
        .expect("embedded document")
}

/// `[3/2, 2]` with G scaled by `1 + i` and a two-piece nondecreasing map.
pub fn complex_example() -> (IntervalGSpace, PiecewiseMap) {
    interval_pair(COMPLEX_SPACE, COMPLEX_MAP)
}

pub fn complex_coeffs() -> SevenCoeffs<f64> {
    load_coeffs(COMPLEX_COEFFS)
        .and_then(|c| c.seven())
        .expect("embedded document")
}
