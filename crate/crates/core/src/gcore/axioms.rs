use serde::Serialize;

use super::scalar::Scalar;
use super::space::GSpace;
use super::value::GValue;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// Offending points, by label.
    pub points: Vec<String>,
    /// Positions of those points in the checked carrier.
    pub indices: Vec<usize>,
    /// G-values involved in the failed comparison.
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomStatus {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl AxiomStatus {
    fn pass() -> Self {
        Self {
            pass: true,
            witness: None,
        }
    }
}

/// Outcome of the exhaustive axiom check. `G1` covers the diagonal
/// (`G(x,x,x) = 0`); strict positivity off the diagonal is reported under
/// `G2`/`G3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    #[serde(rename = "G1")]
    pub g1: AxiomStatus,
    #[serde(rename = "G2")]
    pub g2: AxiomStatus,
    #[serde(rename = "G3")]
    pub g3: AxiomStatus,
    #[serde(rename = "G4")]
    pub g4: AxiomStatus,
    #[serde(rename = "G5")]
    pub g5: AxiomStatus,
    #[serde(rename = "SYM")]
    pub sym: AxiomStatus,
    /// Complex-valued table checked componentwise on re and im.
    pub cone_interpreted: bool,
    /// Set when the carrier was a sampling grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub all_pass: bool,
}

impl AxiomReport {
    pub fn statuses(&self) -> [(&'static str, &AxiomStatus); 6] {
        [
            ("G1", &self.g1),
            ("G2", &self.g2),
            ("G3", &self.g3),
            ("G4", &self.g4),
            ("G5", &self.g5),
            ("SYM", &self.sym),
        ]
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.statuses()
            .into_iter()
            .filter(|(_, s)| !s.pass)
            .map(|(n, _)| n)
            .collect()
    }
}

fn values_equal<S: Scalar>(a: &GValue<S>, b: &GValue<S>) -> bool {
    a.cone_le(b) && b.cone_le(a)
}

fn positive<S: Scalar>(v: &GValue<S>, cone: bool) -> bool {
    let z = S::zero();
    z.lt_tol(&v.re) && (!cone || z.lt_tol(&v.im))
}

/// Checks (G1) to (G5) and symmetry over every tuple of carrier points,
/// recording the lexicographically first failure of each axiom.
pub fn check_axioms<Sp: GSpace>(space: &Sp) -> AxiomReport {
    let pts = space.carrier();
    let n = pts.len();
    let g = |i: usize, j: usize, k: usize| space.g(&pts[i], &pts[j], &pts[k]);
    let witness = |idx: &[usize], vals: &[GValue<Sp::Scalar>]| Witness {
        points: idx.iter().map(|&i| space.label(&pts[i])).collect(),
        indices: idx.to_vec(),
        values: vals.iter().map(GValue::render).collect(),
    };

    let mut cone = false;
    'scan: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if !g(i, j, k).is_real() {
                    cone = true;
                    break 'scan;
                }
            }
        }
    }

    let mut g1 = AxiomStatus::pass();
    for i in 0..n {
        let v = g(i, i, i);
        if !v.is_zero() {
            g1 = AxiomStatus {
                pass: false,
                witness: Some(witness(&[i], &[v])),
            };
            break;
        }
    }

    let mut g2 = AxiomStatus::pass();
    let mut sym = AxiomStatus::pass();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let xxy = g(x, x, y);
            if g2.pass && !positive(&xxy, cone) {
                g2 = AxiomStatus {
                    pass: false,
                    witness: Some(witness(&[x, y], std::slice::from_ref(&xxy))),
                };
            }
            let xyy = g(x, y, y);
            if sym.pass && !values_equal(&xyy, &xxy) {
                sym = AxiomStatus {
                    pass: false,
                    witness: Some(witness(&[x, y], &[xyy, xxy])),
                };
            }
        }
    }

    let mut g3 = AxiomStatus::pass();
    let mut g4 = AxiomStatus::pass();
    'outer3: for x in 0..n {
        for y in 0..n {
            let xxy = g(x, x, y);
            for z in 0..n {
                let xyz = g(x, y, z);
                if g3.pass && z != y && !xxy.cone_le(&xyz) {
                    g3 = AxiomStatus {
                        pass: false,
                        witness: Some(witness(&[x, y, z], &[xxy.clone(), xyz.clone()])),
                    };
                }
                if g4.pass {
                    let perms = [g(x, z, y), g(y, x, z), g(y, z, x), g(z, x, y), g(z, y, x)];
                    if let Some(bad) = perms.into_iter().find(|p| !values_equal(p, &xyz)) {
                        g4 = AxiomStatus {
                            pass: false,
                            witness: Some(witness(&[x, y, z], &[xyz.clone(), bad])),
                        };
                    }
                }
                if !g3.pass && !g4.pass {
                    break 'outer3;
                }
            }
        }
    }

    let mut g5 = AxiomStatus::pass();
    'outer5: for x in 0..n {
        for a in 0..n {
            let xaa = g(x, a, a);
            for y in 0..n {
                for z in 0..n {
                    let lhs = g(x, y, z);
                    let rhs = xaa.clone() + g(a, y, z);
                    if !lhs.cone_le(&rhs) {
                        // report in (x,y,z,a) order
                        g5 = first_g5_failure(space, &pts, &witness);
                        break 'outer5;
                    }
                }
            }
        }
    }

    let all_pass = [&g1, &g2, &g3, &g4, &g5, &sym].iter().all(|s| s.pass);
    AxiomReport {
        g1,
        g2,
        g3,
        g4,
        g5,
        sym,
        cone_interpreted: cone,
        grid: space.grid(),
        all_pass,
    }
}

// The scan above runs a-outer for speed; the reported witness is the
// lexicographically first (x,y,z,a).
fn first_g5_failure<Sp: GSpace>(
    space: &Sp,
    pts: &[Sp::Point],
    witness: &impl Fn(&[usize], &[GValue<Sp::Scalar>]) -> Witness,
) -> AxiomStatus {
    let n = pts.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = space.g(&pts[x], &pts[y], &pts[z]);
                for a in 0..n {
                    let xaa = space.g(&pts[x], &pts[a], &pts[a]);
                    let ayz = space.g(&pts[a], &pts[y], &pts[z]);
                    let rhs = xaa.clone() + ayz.clone();
                    if !lhs.cone_le(&rhs) {
                        return AxiomStatus {
                            pass: false,
                            witness: Some(witness(&[x, y, z, a], &[lhs, xaa, ayz])),
                        };
                    }
                }
            }
        }
    }
    AxiomStatus::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gcore::finite::{numbered_points, FiniteGSpace};
    use crate::gcore::interval::IntervalGSpace;
    use crate::gcore::scalar::{rat, Rational};

    fn gv(n: i64, d: i64) -> GValue<Rational> {
        GValue::from_rational(&rat(n, d))
    }

    #[test]
    fn example_one_passes_everything() {
        let r = check_axioms(&corpus::example1_space());
        assert!(r.all_pass, "{:?}", r.failing());
        assert!(!r.cone_interpreted);
        assert_eq!(r.grid, None);
    }

    #[test]
    fn one_point_space_is_valid() {
        let s = FiniteGSpace::new(vec!["p".into()], []).unwrap();
        assert!(check_axioms(&s).all_pass);
    }

    #[test]
    fn zeroed_entry_breaks_positivity() {
        let s = corpus::example1_space();
        let zero_idx = s.with_value([0, 2, 2], GValue::zero()).unwrap();
        let r = check_axioms(&zero_idx);
        assert!(!r.g2.pass);
        let w = r.g2.witness.unwrap();
        let mut pts = w.points.clone();
        pts.sort();
        assert_eq!(pts, vec!["0".to_string(), "1".to_string()]);
        assert!(!r.sym.pass);
        assert!(!r.all_pass);
    }

    #[test]
    fn nonzero_diagonal_fails_g1() {
        let s = corpus::example1_space().with_value([1, 1, 1], gv(1, 2)).unwrap();
        let r = check_axioms(&s);
        assert!(!r.g1.pass);
        assert_eq!(r.g1.witness.unwrap().points, vec!["1/2".to_string()]);
    }

    #[test]
    fn rectangle_violation_is_found() {
        // G(0,1,2) far exceeds G(0,2,2) + G(2,1,2)
        let s = FiniteGSpace::from_fn(numbered_points(3), |k| {
            if k == [0, 1, 2] {
                gv(10, 1)
            } else if k[0] == k[2] {
                GValue::zero()
            } else {
                gv(1, 1)
            }
        })
        .unwrap();
        let r = check_axioms(&s);
        assert!(r.g1.pass && r.g2.pass && r.g3.pass && r.g4.pass && r.sym.pass);
        assert!(!r.g5.pass);
        let w = r.g5.witness.unwrap();
        assert_eq!(w.indices, vec![0, 1, 2, 1]);
    }

    #[test]
    fn nonsymmetric_but_valid_space() {
        // G(0,0,1)=1, G(0,1,1)=2 is a non-symmetric G-metric on two points
        let s = FiniteGSpace::new(numbered_points(2), [([0, 0, 1], gv(1, 1)), ([0, 1, 1], gv(2, 1))])
            .unwrap();
        let r = check_axioms(&s);
        assert!(!r.sym.pass);
        assert_eq!(r.failing(), vec!["SYM"]);
    }

    #[test]
    fn interval_grids_satisfy_axioms() {
        for complex in [false, true] {
            let s = IntervalGSpace::new(rat(3, 2), rat(2, 1), complex, 9).unwrap();
            let r = check_axioms(&s);
            assert!(r.all_pass, "{:?}", r.failing());
            assert_eq!(r.cone_interpreted, complex);
            assert_eq!(r.grid, Some(9));
        }
    }
}
