//! Seeded generation of finite G-metric spaces, self-maps, point orders and
//! admissible coefficients, plus the falsification driver in [`falsify`].

mod falsify;

pub use falsify::{
    falsify, replay, Conclusion, ConclusionStatus, Counterexample, FalsifyReport, Instance,
};

use num::{BigInt, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{SevenCoeffs, T2Coeffs, T3Coeffs};
use crate::corder::FiniteOrder;
use crate::gcore::scalar::rational_text;
use crate::gcore::{
    check_axioms, multisets, numbered_points, rat, FiniteGSpace, FiniteMap, GValue, Rational,
};
use crate::{Error, Result};

pub const MIN_POINTS: usize = 2;
pub const MAX_POINTS: usize = 8;
const PERTURB_BUDGET: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenMode {
    /// Random metric, repaired by shortest-path closure, then `G = max d`.
    FromMetricMax,
    /// A `FromMetricMax` table nudged by small rational deltas and re-checked.
    RejectionPerturb,
}

impl std::str::FromStr for GenMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "from-metric-max" => Ok(GenMode::FromMetricMax),
            "rejection-perturb" => Ok(GenMode::RejectionPerturb),
            _ => Err(Error::Argument(format!(
                "unknown mode {s:?}, expected from-metric-max or rejection-perturb"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenConfig {
    pub min_points: usize,
    pub max_points: usize,
    pub mode: GenMode,
    #[serde(serialize_with = "rational_text::serialize")]
    pub value_lo: Rational,
    #[serde(serialize_with = "rational_text::serialize")]
    pub value_hi: Rational,
    pub max_denominator: u32,
    pub seed: u64,
    pub trials: usize,
    /// When false, spaces are perturbed off symmetry (G1 to G5 still hold).
    pub symmetric: bool,
    /// Replace trial 0 with the built-in three-point example (T1 only).
    pub inject_example: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            min_points: 3,
            max_points: 5,
            mode: GenMode::FromMetricMax,
            value_lo: rat(1, 4),
            value_hi: rat(4, 1),
            max_denominator: 16,
            seed: 0,
            trials: 1000,
            symmetric: true,
            inject_example: false,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_points < MIN_POINTS || self.max_points > MAX_POINTS {
            return Err(Error::Argument(format!(
                "point counts must lie in [{MIN_POINTS}, {MAX_POINTS}]"
            )));
        }
        if self.min_points > self.max_points {
            return Err(Error::Argument("min_points exceeds max_points".into()));
        }
        if self.value_lo <= Rational::zero() || self.value_lo > self.value_hi {
            return Err(Error::Argument("value range must satisfy 0 < lo ≤ hi".into()));
        }
        if self.max_denominator == 0 {
            return Err(Error::Argument("max_denominator must be positive".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finaliser; derives independent per-trial seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(master: u64, trial: usize) -> u64 {
    splitmix64(master ^ splitmix64(trial as u64))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform denominator in `1..=max_den`, then a uniform numerator keeping
/// the value in `[lo, hi]`.
pub fn random_rational(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, max_den: u32) -> Rational {
    loop {
        let den = rng.gen_range(1..=max_den.max(1)) as i64;
        let d = BigInt::from(den);
        let lo_n = (lo * Rational::from_integer(d.clone())).ceil().to_integer();
        let hi_n = (hi * Rational::from_integer(d.clone())).floor().to_integer();
        let (Some(a), Some(b)) = (lo_n.to_i64(), hi_n.to_i64()) else {
            continue;
        };
        if a <= b {
            return Rational::new(BigInt::from(rng.gen_range(a..=b)), d);
        }
    }
}

/// Shortest-path closure of a symmetric distance matrix.
pub fn metric_closure(d: &mut [Vec<Rational>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// `G(x,y,z) = max{d(x,y), d(y,z), d(z,x)}`.
pub fn space_from_metric(d: &[Vec<Rational>]) -> Result<FiniteGSpace> {
    FiniteGSpace::from_fn(numbered_points(d.len()), |[i, j, k]| {
        let m = d[i][j].clone().max(d[j][k].clone()).max(d[k][i].clone());
        GValue::from_rational(&m)
    })
}

#[allow(clippy::needless_range_loop)]
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize, cfg: &GenConfig) -> Vec<Vec<Rational>> {
    let mut d = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = random_rational(rng, &cfg.value_lo, &cfg.value_hi, cfg.max_denominator);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    metric_closure(&mut d);
    d
}

fn perturb(rng: &mut ChaCha8Rng, base: &FiniteGSpace, cfg: &GenConfig, symmetric: bool) -> Result<FiniteGSpace> {
    let n = base.len();
    let keys: Vec<[usize; 3]> = multisets(n).filter(|k| !(k[0] == k[1] && k[1] == k[2])).collect();
    let bound = rat(1, 4);
    for _ in 0..PERTURB_BUDGET {
        let mut s = base.clone();
        let edits = rng.gen_range(1..=3usize);
        let mut ok = true;
        for _ in 0..edits {
            let key = *keys.choose(rng).expect("at least two points");
            let delta = random_rational(rng, &-bound.clone(), &bound, cfg.max_denominator);
            let v = s.table()[&key].re.clone() + delta;
            if v <= Rational::zero() {
                ok = false;
                break;
            }
            let gv = GValue::from_rational(&v);
            s = s.with_value(key, gv.clone())?;
            let distinct: Vec<usize> = {
                let mut d = key.to_vec();
                d.dedup();
                d
            };
            if symmetric && distinct.len() == 2 {
                let (a, b) = (distinct[0], distinct[1]);
                let other = if key == [a, a, b] { [a, b, b] } else { [a, a, b] };
                s = s.with_value(other, gv)?;
            }
        }
        if !ok {
            continue;
        }
        let r = check_axioms(&s);
        let core = r.g1.pass && r.g2.pass && r.g3.pass && r.g4.pass && r.g5.pass;
        if core && (r.sym.pass || !symmetric) && s != *base {
            return Ok(s);
        }
    }
    Err(Error::Generation(format!(
        "no admissible perturbation found in {PERTURB_BUDGET} attempts"
    )))
}

/// Draws a space according to `cfg`; the point count is uniform in
/// `[min_points, max_points]`.
pub fn gen_space(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<FiniteGSpace> {
    let n = rng.gen_range(cfg.min_points..=cfg.max_points);
    let base = space_from_metric(&random_metric(rng, n, cfg))?;
    match (cfg.mode, cfg.symmetric) {
        (GenMode::FromMetricMax, true) => Ok(base),
        (_, symmetric) => perturb(rng, &base, cfg, symmetric),
    }
}

/// Uniform random function on `n` points.
pub fn gen_map_with(rng: &mut ChaCha8Rng, n: usize) -> FiniteMap {
    let targets = (0..n).map(|_| rng.gen_range(0..n)).collect();
    FiniteMap::new(targets, n).expect("targets in range")
}

pub fn gen_map(n: usize, seed: u64) -> Result<FiniteMap> {
    if n == 0 {
        return Err(Error::Argument("a map needs at least one point".into()));
    }
    Ok(gen_map_with(&mut rng_for(seed), n))
}

/// Random partial order: each pair along a random linear extension is
/// related with probability 1/3, then closed.
pub fn gen_order(rng: &mut ChaCha8Rng, n: usize) -> FiniteOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_ratio(1, 3) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    FiniteOrder::from_pairs(n, &pairs).expect("pairs follow a linear extension")
}

/// Splits `total` into `k` nonnegative rationals with small denominators.
fn split(rng: &mut ChaCha8Rng, total: &Rational, k: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=16)).collect();
    let sum: i64 = w.iter().sum();
    if sum == 0 {
        return vec![Rational::zero(); k];
    }
    w.iter().map(|&wi| total * rat(wi, sum)).collect()
}

/// Admissible coefficients with 10% slack below the limiting sum.
pub fn sample_t2(rng: &mut ChaCha8Rng) -> T2Coeffs {
    let total = random_rational(rng, &Rational::zero(), &rat(9, 10), 16);
    let parts = split(rng, &total, 2);
    T2Coeffs::new(parts[0].clone(), parts[1].clone()).expect("sum below 1")
}

fn sample_lambda(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    let lambda = random_rational(rng, &rat(1, 2), &rat(99, 100), 100);
    let budget = &lambda * rat(9, 10);
    (lambda, budget)
}

pub fn sample_t3<P>(rng: &mut ChaCha8Rng) -> T3Coeffs<P> {
    let (lambda, budget) = sample_lambda(rng);
    let total = random_rational(rng, &Rational::zero(), &budget, 16);
    let p = split(rng, &total, 3);
    T3Coeffs::constant([p[0].clone(), p[1].clone(), p[2].clone()], Some(lambda))
}

/// `a1 + 3a2 + 4a3 + a4 + a6` stays below `0.9 λ1`; `a5`, `a7` are free in
/// `[0, 2]`.
pub fn sample_seven<P>(rng: &mut ChaCha8Rng) -> SevenCoeffs<P> {
    let (lambda, budget) = sample_lambda(rng);
    let total = random_rational(rng, &Rational::zero(), &budget, 16);
    let p = split(rng, &total, 5);
    let a5 = random_rational(rng, &Rational::zero(), &rat(2, 1), 16);
    let a7 = random_rational(rng, &Rational::zero(), &rat(2, 1), 16);
    SevenCoeffs::constant(
        [
            p[0].clone(),
            &p[1] / rat(3, 1),
            &p[2] / rat(4, 1),
            p[3].clone(),
            a5,
            p[4].clone(),
            a7,
        ],
        Some(lambda),
    )
}
