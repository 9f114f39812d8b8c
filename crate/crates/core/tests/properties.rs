//! Structural properties of G-metrics, orbits and the proof steps of the
//! contraction theorems, on generated finite spaces.

use gfp_core::certify::{certify_t1, certify_t2};
use gfp_core::gcore::{
    check_axioms, converges_to, converges_to_dg, is_g_cauchy, rat, GSpace, GValue,
    IntervalGSpace,
};
use gfp_core::gen::{gen_map_with, gen_space, rng_for, sample_t2, GenConfig};
use gfp_core::solve::{alpha_step_violations, fixed_points, iterate, Termination};
use gfp_core::{corpus, FiniteGSpace, Rational};
use num::Zero;
use proptest::prelude::*;

fn cfg(min: usize, max: usize) -> GenConfig {
    GenConfig {
        min_points: min,
        max_points: max,
        ..GenConfig::default()
    }
}

fn orbits(s: &FiniteGSpace, m: &gfp_core::FiniteMap) -> Vec<gfp_core::solve::OrbitTrace<usize, Rational>> {
    (0..s.len())
        .map(|x| iterate(s, m, x, &Rational::zero(), s.len() + 1).unwrap())
        .collect()
}

#[test]
fn permutation_invariance_of_g() {
    for seed in 0..50 {
        let s = gen_space(&mut rng_for(seed), &cfg(2, 5)).unwrap();
        let n = s.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = s.g(&x, &y, &z);
                    for (a, b, c) in [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
                        assert_eq!(s.g(&a, &b, &c), v);
                    }
                }
            }
        }
    }
    let (s, _) = corpus::interval_example();
    let pts = s.carrier();
    for &x in pts.iter().step_by(7) {
        for &y in pts.iter().step_by(5) {
            for &z in pts.iter().step_by(3) {
                assert_eq!(s.g(&x, &y, &z).re.to_bits(), s.g(&z, &x, &y).re.to_bits());
                assert_eq!(s.g(&x, &y, &z).re.to_bits(), s.g(&y, &z, &x).re.to_bits());
            }
        }
    }
}

#[test]
fn derived_metric_is_a_metric() {
    for seed in 0..60 {
        let s = gen_space(&mut rng_for(seed), &cfg(2, 6)).unwrap();
        let n = s.len();
        for x in 0..n {
            for y in 0..n {
                let d = s.derived_metric(&x, &y).unwrap();
                assert_eq!(d, s.derived_metric(&y, &x).unwrap());
                assert_eq!(d.is_zero(), x == y);
                for z in 0..n {
                    let via = s.dg(&x, &z) + s.dg(&z, &y);
                    assert!(d.cone_le(&via));
                }
            }
        }
    }
}

#[test]
fn t1_orbits_satisfy_alpha_step() {
    let mut hits = 0;
    for seed in 0..400 {
        let mut rng = rng_for(seed);
        let s = gen_space(&mut rng, &cfg(3, 5)).unwrap();
        let m = gen_map_with(&mut rng, s.len());
        if !certify_t1(&s, &m).unwrap().holds {
            continue;
        }
        hits += 1;
        for t in orbits(&s, &m) {
            assert!(alpha_step_violations(&t.d, &t.alpha).is_empty(), "seed {seed}");
        }
    }
    assert!(hits > 20);
}

#[test]
fn t2_fixed_point_is_unique_and_attracting() {
    let mut hits = 0;
    for seed in 0..400 {
        let mut rng = rng_for(seed);
        let s = gen_space(&mut rng, &cfg(3, 5)).unwrap();
        let m = gen_map_with(&mut rng, s.len());
        let c = sample_t2(&mut rng);
        if !certify_t2(&s, &m, &c).unwrap().holds {
            continue;
        }
        hits += 1;
        let fps = fixed_points(&s, &m).unwrap();
        assert_eq!(fps.len(), 1, "seed {seed}");
        for t in orbits(&s, &m) {
            assert_eq!(t.terminated, Termination::Converged);
            assert_eq!(t.limit, Some(fps[0]));
        }
    }
    assert!(hits > 5);
}

#[test]
fn g_and_dg_convergence_agree() {
    // G(x*, x_n, x_n) <= d_G(x_n, x*) <= 2 max G on symmetric spaces.
    for seed in 0..100 {
        let mut rng = rng_for(seed);
        let s = gen_space(&mut rng, &cfg(3, 5)).unwrap();
        let m = gen_map_with(&mut rng, s.len());
        for t in orbits(&s, &m) {
            let Some(l) = t.limit else { continue };
            for eps in [rat(1, 100), rat(1, 1), rat(3, 1)] {
                let g = converges_to(&t.points, &l, &s, &eps, 2).unwrap();
                let d = converges_to_dg(&t.points, &l, &s, &eps, 2).unwrap();
                let d2 = converges_to_dg(&t.points, &l, &s, &(&eps * rat(2, 1)), 2).unwrap();
                assert!(!d || g);
                assert!(!g || d2);
            }
        }
    }
    let (s, m) = corpus::interval_example();
    let t = iterate(&s, &m, 1.6, &1e-9, 10_000).unwrap();
    let l = t.limit.unwrap();
    assert!(converges_to(&t.points, &l, &s, &1e-6, 10).unwrap());
    assert!(converges_to_dg(&t.points, &l, &s, &1e-6, 10).unwrap());
    assert!(!converges_to(&t.points, &1.5, &s, &1e-6, 10).unwrap());
    assert!(!converges_to_dg(&t.points, &1.5, &s, &1e-6, 10).unwrap());
}

#[test]
fn converged_traces_are_cauchy() {
    let (s, m) = corpus::interval_example();
    for x0 in [1.5, 1.6, 1.75, 1.9, 2.0] {
        let t = iterate(&s, &m, x0, &1e-9, 10_000).unwrap();
        assert_eq!(t.terminated, Termination::Converged);
        assert!(t.residual.as_ref().unwrap().re < 1e-9);
        if t.points.len() > 3 {
            assert!(is_g_cauchy(&t.points, &s, &1e-6, 3).unwrap());
        }
    }
}

fn interval() -> impl Strategy<Value = (i64, i64, i64, bool, usize)> {
    (-20i64..20, 1i64..20, 1i64..8, any::<bool>(), 2usize..10)
}

proptest! {
    #[test]
    fn max_abs_diff_is_a_g_metric((lo, width, den, complex, grid) in interval()) {
        let s = IntervalGSpace::new(rat(lo, den), rat(lo + width, den), complex, grid).unwrap();
        let r = check_axioms(&s);
        prop_assert!(r.all_pass, "{:?}", r.failing());
    }

    #[test]
    fn cone_order_is_componentwise(a in 0i64..50, b in 0i64..50, c in 0i64..50, d in 0i64..50) {
        let u = GValue::new(rat(a, 1), rat(b, 1));
        let v = GValue::new(rat(c, 1), rat(d, 1));
        prop_assert_eq!(u.cone_le(&v), a <= c && b <= d);
        let (ru, rv) = (GValue::<f64>::from_rational(&rat(a, 1)), GValue::<f64>::from_rational(&rat(c, 1)));
        prop_assert_eq!(ru.cone_le(&rv), a <= c);
    }
}

#[test]
fn verdicts_survive_relabelling() {
    use gfp_core::certify::{certify_t3, certify_t4};
    use gfp_core::gen::{sample_seven, sample_t3};
    use rand::seq::SliceRandom;
    for seed in 0..150 {
        let mut rng = rng_for(seed);
        let s = gen_space(&mut rng, &cfg(2, 5)).unwrap();
        let m = gen_map_with(&mut rng, s.len());
        let (c2, c3, c4) = (sample_t2(&mut rng), sample_t3(&mut rng), sample_seven(&mut rng));
        let mut perm: Vec<usize> = (0..s.len()).collect();
        perm.shuffle(&mut rng);
        let (ps, pm) = (s.relabel(&perm).unwrap(), m.relabel(&perm));
        assert_eq!(certify_t1(&s, &m).unwrap().holds, certify_t1(&ps, &pm).unwrap().holds);
        let (a, b) = (certify_t2(&s, &m, &c2).unwrap(), certify_t2(&ps, &pm, &c2).unwrap());
        assert_eq!((a.holds, a.violation_count), (b.holds, b.violation_count));
        assert_eq!(certify_t3(&s, &m, &c3).unwrap().holds, certify_t3(&ps, &pm, &c3).unwrap().holds);
        assert_eq!(certify_t4(&s, &m, &c4).unwrap().holds, certify_t4(&ps, &pm, &c4).unwrap().holds);
        let fa: Vec<String> = fixed_points(&s, &m).unwrap().iter().map(|p| s.label(p)).collect();
        let mut fb: Vec<String> = fixed_points(&ps, &pm).unwrap().iter().map(|p| ps.label(p)).collect();
        let mut fa = fa;
        fa.sort();
        fb.sort();
        assert_eq!(fa, fb);
    }
}
