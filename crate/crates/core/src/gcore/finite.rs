use std::collections::BTreeMap;

use super::scalar::Rational;
use super::space::GSpace;
use super::value::GValue;
use crate::{Error, Result};

/// Canonical key of the multiset `{i,j,k}`.
pub fn triple_key(i: usize, j: usize, k: usize) -> [usize; 3] {
    let mut t = [i, j, k];
    t.sort_unstable();
    t
}

/// All multisets `{i<=j<=k}` over `n` indices, in lexicographic order.
pub fn multisets(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i| (i..n).flat_map(move |j| (j..n).map(move |k| [i, j, k])))
}

/// G-metric on `n` labelled points, tabulated by sorted index multiset so
/// that permutation symmetry holds by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGSpace {
    points: Vec<String>,
    table: BTreeMap<[usize; 3], GValue<Rational>>,
}

impl FiniteGSpace {
    /// Builds a space from tabulated entries. Triples may be given in any
    /// order. Missing diagonal triples default to zero; any other missing
    /// multiset is a structural error.
    pub fn new<I>(points: Vec<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ([usize; 3], GValue<Rational>)>,
    {
        let n = points.len();
        if n == 0 {
            return Err(Error::Structural("a space needs at least one point".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Structural(format!("duplicate point label {p:?}")));
            }
        }
        let mut table = BTreeMap::new();
        for (t, v) in entries {
            if let Some(&bad) = t.iter().find(|&&i| i >= n) {
                return Err(Error::Structural(format!(
                    "triple {t:?} references index {bad} but the space has {n} points"
                )));
            }
            if !v.is_nonnegative() {
                return Err(Error::Structural(format!(
                    "G{t:?} = {v} lies outside the nonnegative cone"
                )));
            }
            let key = triple_key(t[0], t[1], t[2]);
            if let Some(prev) = table.get(&key) {
                if *prev != v {
                    return Err(Error::Structural(format!(
                        "conflicting values {prev} and {v} for multiset {key:?}"
                    )));
                }
            }
            table.insert(key, v);
        }
        let mut missing = Vec::new();
        for key in multisets(n) {
            if table.contains_key(&key) {
                continue;
            }
            if key[0] == key[2] {
                table.insert(key, GValue::zero());
            } else {
                missing.push(key);
            }
        }
        if !missing.is_empty() {
            let list: Vec<String> = missing.iter().map(|k| format!("{k:?}")).collect();
            return Err(Error::Structural(format!(
                "incomplete table, missing triples: {}",
                list.join(", ")
            )));
        }
        Ok(Self { points, table })
    }

    /// Builds a space by evaluating `f` on every multiset.
    pub fn from_fn<F>(points: Vec<String>, mut f: F) -> Result<Self>
    where
        F: FnMut([usize; 3]) -> GValue<Rational>,
    {
        let n = points.len();
        let entries: Vec<_> = multisets(n).map(|k| (k, f(k))).collect();
        Self::new(points, entries)
    }

    /// Copy with one multiset's value replaced.
    pub fn with_value(&self, triple: [usize; 3], v: GValue<Rational>) -> Result<Self> {
        let mut entries: Vec<_> = self.table.clone().into_iter().collect();
        let key = triple_key(triple[0], triple[1], triple[2]);
        entries.retain(|(k, _)| *k != key);
        entries.push((key, v));
        Self::new(self.points.clone(), entries)
    }

    /// Copy with every point index `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::Argument("permutation length mismatch".into()));
        }
        let mut points = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            points[p] = self.points[i].clone();
        }
        let entries: Vec<_> = self
            .table
            .iter()
            .map(|(k, v)| ([perm[k[0]], perm[k[1]], perm[k[2]]], v.clone()))
            .collect();
        Self::new(points, entries)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn table(&self) -> &BTreeMap<[usize; 3], GValue<Rational>> {
        &self.table
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| Error::Domain(format!("unknown point label {label:?}")))
    }

    /// `G` by point labels.
    pub fn eval_labels(&self, x: &str, y: &str, z: &str) -> Result<GValue<Rational>> {
        Ok(self.g(&self.index_of(x)?, &self.index_of(y)?, &self.index_of(z)?))
    }

    pub fn is_complex(&self) -> bool {
        self.table.values().any(|v| !v.is_real())
    }

    /// Multiplies every value by `c`.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        let entries: Vec<_> = self.table.iter().map(|(k, v)| (*k, v.scale(c))).collect();
        Self::new(self.points.clone(), entries)
    }
}

impl GSpace for FiniteGSpace {
    type Point = usize;
    type Scalar = Rational;

    fn g(&self, x: &usize, y: &usize, z: &usize) -> GValue<Rational> {
        self.table[&triple_key(*x, *y, *z)].clone()
    }

    fn contains(&self, p: &usize) -> bool {
        *p < self.points.len()
    }

    fn carrier(&self) -> Vec<usize> {
        (0..self.points.len()).collect()
    }

    fn label(&self, p: &usize) -> String {
        self.points
            .get(*p)
            .cloned()
            .unwrap_or_else(|| format!("#{p}"))
    }

    fn point_id(&self, p: &usize) -> Option<usize> {
        Some(*p)
    }
}

/// Labels `"0"`, `"1"`, ... for generated spaces.
pub fn numbered_points(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gcore::scalar::rat;

    #[test]
    fn example_one_values_match_table() {
        let s = corpus::example1_space();
        assert_eq!(s.eval_labels("0", "1", "1").unwrap(), GValue::from_rational(&rat(6, 1)));
        assert_eq!(s.eval_labels("1", "0", "0").unwrap(), GValue::from_rational(&rat(6, 1)));
        assert_eq!(s.eval_labels("0", "1/2", "1").unwrap(), GValue::from_rational(&rat(15, 2)));
        assert_eq!(s.eval_labels("1", "1", "1").unwrap(), GValue::zero());
        assert!(s.eval_labels("0", "2", "1").is_err());
    }

    #[test]
    fn permutations_agree_exactly() {
        let s = corpus::example1_space();
        for t in multisets(3) {
            let v = s.g(&t[0], &t[1], &t[2]);
            for (a, b, c) in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                assert_eq!(s.g(&t[a], &t[b], &t[c]), v);
            }
        }
    }

    #[test]
    fn missing_off_diagonal_triple_is_structural() {
        let pts = numbered_points(2);
        let err = FiniteGSpace::new(pts, [([0, 0, 1], GValue::from_rational(&rat(1, 1)))])
            .unwrap_err();
        match err {
            Error::Structural(m) => assert!(m.contains("[0, 1, 1]"), "{m}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rejects_negative_and_conflicting_values() {
        let pts = numbered_points(2);
        let neg = FiniteGSpace::new(
            pts.clone(),
            [
                ([0, 0, 1], GValue::from_rational(&rat(-1, 1))),
                ([0, 1, 1], GValue::from_rational(&rat(1, 1))),
            ],
        );
        assert!(matches!(neg, Err(Error::Structural(_))));
        let conflict = FiniteGSpace::new(
            pts,
            [
                ([0, 0, 1], GValue::from_rational(&rat(1, 1))),
                ([1, 0, 0], GValue::from_rational(&rat(2, 1))),
                ([0, 1, 1], GValue::from_rational(&rat(1, 1))),
            ],
        );
        assert!(matches!(conflict, Err(Error::Structural(_))));
    }

    #[test]
    fn relabel_moves_values_with_points() {
        let s = corpus::example1_space();
        let r = s.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(r.points(), &["1/2".to_string(), "1".to_string(), "0".to_string()]);
        assert_eq!(r.eval_labels("0", "1", "1").unwrap(), s.eval_labels("0", "1", "1").unwrap());
    }
}
