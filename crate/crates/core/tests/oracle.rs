//! Certificates re-checked by a straight-line evaluator that shares no code
//! with the certifier: its own table lookup and its own arithmetic.

use gfp_core::certify::{certify_t1, certify_t2, certify_t3, certify_t4, T2Coeffs, TheoremId};
use gfp_core::doc::{CoeffDoc, RatText, SpaceDoc};
use gfp_core::gen::{falsify, gen_map_with, gen_space, rng_for, sample_seven, sample_t2, sample_t3, GenConfig};
use gfp_core::{corpus, FiniteGSpace, FiniteMap, Rational};
use num::{One, Zero};
use rand::Rng;

/// Plain `G` lookup from the serialized document.
struct Table {
    n: usize,
    g: Vec<Rational>,
}

impl Table {
    fn from(space: &FiniteGSpace) -> Self {
        let doc = gfp_core::doc::finite_space_doc(space);
        let SpaceDoc::Finite { points, values } = doc else { unreachable!() };
        let n = points.len();
        let mut g = vec![Rational::zero(); n * n * n];
        for v in values {
            let gfp_core::doc::GText::Real(RatText(r)) = v.g else { panic!("real tables only") };
            let [a, b, c] = v.triple;
            for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                g[(i * n + j) * n + k] = r.clone();
            }
        }
        Self { n, g }
    }

    fn g(&self, i: usize, j: usize, k: usize) -> Rational {
        self.g[(i * self.n + j) * self.n + k].clone()
    }
}

#[allow(clippy::large_enum_variant)]
enum Cond {
    T1,
    T2(Rational, Rational),
    T3([Rational; 3]),
    T4([Rational; 7]),
}

fn holds_at(t: &Table, f: &[usize], c: &Cond, x: usize, y: usize, z: usize) -> bool {
    let (tx, ty, tz) = (f[x], f[y], f[z]);
    let lhs = t.g(tx, ty, tz);
    let gxyz = t.g(x, y, z);
    let one = Rational::one();
    let (gx, gy, gz) = (t.g(x, tx, tx), t.g(y, ty, ty), t.g(z, tz, tz));
    match c {
        Cond::T1 => {
            // lhs * den <= num * G with den > 0
            let den = gx + gy + gz + &one;
            let num = t.g(tx, y, z) + t.g(x, ty, z) + t.g(x, y, tz);
            lhs * den <= num * gxyz
        }
        Cond::T2(alpha, beta) => {
            let m = if gy < gz { gy } else { gz };
            let den = &one + &gxyz;
            lhs * &den <= alpha * m * (&one + gx) + beta * &gxyz * &den
        }
        Cond::T3(a) => {
            let den = &one + &gxyz;
            let lead = (&a[0] * gy + &a[1] * gz) * (&one + gx);
            lhs * &den <= lead + &a[2] * &gxyz * &den
        }
        Cond::T4(a) => {
            let den = &one + &gxyz;
            let (p, q, r) = (t.g(tx, y, z), t.g(x, ty, z), t.g(x, y, tz));
            let m = if gy < gz { gy.clone() } else { gz.clone() };
            let flat = &a[0] * &gxyz
                + &a[1] * (&gx + &gy + &gz)
                + &a[2] * (&p + &q + &r)
                + &a[6] * &p;
            let scaled = &a[3] * m * (&one + &gx)
                + &a[4] * &p * (&one + &q + &r)
                + &a[5] * &gxyz * (&one + &gx + &p);
            lhs * &den <= flat * &den + scaled
        }
    }
}

fn all_hold(t: &Table, f: &[usize], c: &Cond) -> bool {
    let n = t.n;
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| holds_at(t, f, c, x, y, z))))
}

fn consts<const N: usize>(a: &[gfp_core::certify::Coeff<usize>; N]) -> [Rational; N] {
    std::array::from_fn(|i| a[i].as_const().expect("constant").clone())
}

#[test]
fn example_instance_agrees() {
    let (s, m) = (corpus::example1_space(), corpus::example1_map());
    let t = Table::from(&s);
    assert!(certify_t1(&s, &m).unwrap().holds);
    assert!(all_hold(&t, m.targets(), &Cond::T1));
    let c = T2Coeffs::new(Rational::new(1.into(), 4.into()), Rational::new(1.into(), 4.into())).unwrap();
    assert!(!certify_t2(&s, &m, &c).unwrap().holds);
    assert!(!all_hold(&t, m.targets(), &Cond::T2(c.alpha, c.beta)));
}

#[test]
fn random_certificates_agree_with_oracle() {
    let cfg = GenConfig {
        min_points: 2,
        max_points: 5,
        ..GenConfig::default()
    };
    let mut hits = 0;
    for seed in 0..300 {
        let mut rng = rng_for(seed);
        let s = gen_space(&mut rng, &cfg).unwrap();
        let m: FiniteMap = gen_map_with(&mut rng, s.len());
        let t = Table::from(&s);
        let f = m.targets();

        let c1 = certify_t1(&s, &m).unwrap();
        assert_eq!(c1.holds, all_hold(&t, f, &Cond::T1), "t1 seed {seed}");
        let c2 = sample_t2(&mut rng);
        let cert = certify_t2(&s, &m, &c2).unwrap();
        assert_eq!(cert.holds, all_hold(&t, f, &Cond::T2(c2.alpha, c2.beta)), "t2 seed {seed}");
        let c3 = sample_t3::<usize>(&mut rng);
        let cert = certify_t3(&s, &m, &c3).unwrap();
        assert_eq!(cert.holds, all_hold(&t, f, &Cond::T3(consts(&c3.a))), "t3 seed {seed}");
        let c4 = sample_seven::<usize>(&mut rng);
        let cert = certify_t4(&s, &m, &c4).unwrap();
        assert_eq!(cert.holds, all_hold(&t, f, &Cond::T4(consts(&c4.a))), "t4 seed {seed}");

        if c1.holds {
            hits += 1;
            let n = s.len();
            for _ in 0..100 {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                assert!(holds_at(&t, f, &Cond::T1, x, y, z));
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn falsify_hits_agree_with_oracle() {
    let cfg = GenConfig {
        seed: 42,
        trials: 200,
        ..GenConfig::default()
    };
    let doc = CoeffDoc {
        alpha: Some(RatText(Rational::new(1.into(), 3.into()))),
        beta: Some(RatText(Rational::new(1.into(), 3.into()))),
        ..CoeffDoc::default()
    };
    let r = falsify(TheoremId::T2, &cfg, Some(&doc)).unwrap();
    let third = Rational::new(1.into(), 3.into());
    let mut oracle_hits = 0;
    for trial in 0..cfg.trials {
        let inst = gfp_core::gen::replay(TheoremId::T2, &cfg, Some(&doc), trial).unwrap();
        let t = Table::from(&inst.space);
        if all_hold(&t, inst.map.targets(), &Cond::T2(third.clone(), third.clone())) {
            oracle_hits += 1;
        }
    }
    assert_eq!(r.hypothesis_hits, oracle_hits);
}
