use num::Zero;
use serde::Serialize;

use super::{
    gen_map_with, gen_order, gen_space, rng_for, sample_seven, sample_t2, sample_t3, trial_seed,
    GenConfig,
};
use crate::certify::{self, Certificate, SevenCoeffs, T2Coeffs, T3Coeffs, TheoremId};
use crate::corder::{solve_t5, FiniteOrder, PointOrder};
use crate::corpus;
use crate::doc::{finite_map_doc, finite_space_doc, CoeffDoc, MapDoc, OrderDoc, RatText, SpaceDoc};
use crate::gcore::{FiniteGSpace, FiniteMap, Rational};
use crate::solve::{fixed_points, iterate, rate_estimate, separation_check, RateBound, Termination};
use crate::{Error, Result};

const COUNTEREXAMPLE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConclusionStatus {
    /// A failure is a counterexample and stops the run.
    Asserted,
    /// A failure is recorded as a finding.
    ReportOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conclusion {
    pub name: &'static str,
    pub status: ConclusionStatus,
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    /// Seed of the per-trial generator; regenerates the instance.
    pub seed: u64,
    pub conclusion: &'static str,
    pub status: ConclusionStatus,
    pub detail: String,
    pub space: SpaceDoc,
    pub map: MapDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<CoeffDoc>,
    pub certificate: Certificate<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FalsifyReport {
    pub theorem: TheoremId,
    pub config: GenConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<CoeffDoc>,
    pub trials_run: usize,
    pub hypothesis_hits: usize,
    /// T5 only: trials whose map was not nondecreasing for the drawn order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_monotone_maps: Option<usize>,
    pub conclusion_checks: Vec<Conclusion>,
    pub counterexample_count: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Trial at which an asserted conclusion failed, ending the run.
    pub aborted_at: Option<usize>,
}

impl FalsifyReport {
    pub fn asserted_failures(&self) -> usize {
        self.conclusion_checks
            .iter()
            .filter(|c| c.status == ConclusionStatus::Asserted)
            .map(|c| c.failed)
            .sum()
    }

    pub fn conclusion(&self, name: &str) -> Option<&Conclusion> {
        self.conclusion_checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Coeffs {
    None,
    T2(T2Coeffs),
    T3(T3Coeffs<usize>),
    Seven(SevenCoeffs<usize>),
}

impl Coeffs {
    fn to_doc(&self) -> Option<CoeffDoc> {
        let consts = |a: Vec<Option<&Rational>>, l: &Option<Rational>| CoeffDoc {
            a: Some(a.into_iter().map(|v| RatText(v.cloned().unwrap_or_default())).collect()),
            lambda1: l.clone().map(RatText),
            ..CoeffDoc::default()
        };
        match self {
            Coeffs::None => None,
            Coeffs::T2(c) => Some(CoeffDoc {
                alpha: Some(RatText(c.alpha.clone())),
                beta: Some(RatText(c.beta.clone())),
                ..CoeffDoc::default()
            }),
            Coeffs::T3(c) => Some(consts(c.a.iter().map(|x| x.as_const()).collect(), &c.lambda1)),
            Coeffs::Seven(c) => Some(consts(c.a.iter().map(|x| x.as_const()).collect(), &c.lambda1)),
        }
    }
}

/// One generated trial.
#[derive(Clone, Debug)]
pub struct Instance {
    pub trial: usize,
    pub seed: u64,
    pub space: FiniteGSpace,
    pub map: FiniteMap,
    pub order: Option<FiniteOrder>,
    pub coeffs: Coeffs,
}

fn theorem_coeffs(
    theorem: TheoremId,
    fixed: Option<&CoeffDoc>,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Coeffs> {
    Ok(match (theorem, fixed) {
        (TheoremId::T1, _) => Coeffs::None,
        (TheoremId::T2, Some(d)) => Coeffs::T2(d.t2()?),
        (TheoremId::T2, None) => Coeffs::T2(sample_t2(rng)),
        (TheoremId::T3, Some(d)) => Coeffs::T3(d.t3()?),
        (TheoremId::T3, None) => Coeffs::T3(sample_t3(rng)),
        (_, Some(d)) => Coeffs::Seven(d.seven()?),
        (_, None) => Coeffs::Seven(sample_seven(rng)),
    })
}

/// Regenerates trial `trial` of a run exactly as [`falsify`] saw it.
pub fn replay(
    theorem: TheoremId,
    cfg: &GenConfig,
    coeffs: Option<&CoeffDoc>,
    trial: usize,
) -> Result<Instance> {
    cfg.validate()?;
    let seed = trial_seed(cfg.seed, trial);
    if trial == 0 && cfg.inject_example && theorem == TheoremId::T1 {
        return Ok(Instance {
            trial,
            seed,
            space: corpus::example1_space(),
            map: corpus::example1_map(),
            order: None,
            coeffs: Coeffs::None,
        });
    }
    let mut rng = rng_for(seed);
    let space = gen_space(&mut rng, cfg)?;
    let map = gen_map_with(&mut rng, space.len());
    let order = (theorem == TheoremId::T5).then(|| gen_order(&mut rng, space.len()));
    let coeffs = theorem_coeffs(theorem, coeffs, &mut rng)?;
    Ok(Instance {
        trial,
        seed,
        space,
        map,
        order,
        coeffs,
    })
}

struct Outcome {
    name: &'static str,
    status: ConclusionStatus,
    failure: Option<String>,
}

fn outcome(name: &'static str, status: ConclusionStatus, failure: Option<String>) -> Outcome {
    Outcome {
        name,
        status,
        failure,
    }
}

/// Starting points whose orbits do not end at a fixed point.
fn non_convergent(space: &FiniteGSpace, map: &FiniteMap, target: Option<usize>) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for x in 0..space.len() {
        let t = iterate(space, map, x, &Rational::zero(), space.len() + 1)?;
        let ok = t.terminated == Termination::Converged
            && t.limit.is_some_and(|l| map.at(l) == l && target.is_none_or(|f| f == l));
        if !ok {
            bad.push(x);
        }
    }
    Ok(bad)
}

fn rate_failures(space: &FiniteGSpace, map: &FiniteMap, bound: &RateBound<usize>) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for x in 0..space.len() {
        let t = iterate(space, map, x, &Rational::zero(), space.len() + 1)?;
        let r = rate_estimate(&t.d, Some(bound));
        if r.step_check.is_some_and(|s| !s.violations.is_empty()) {
            bad.push(x);
        }
    }
    Ok(bad)
}

fn labels(space: &FiniteGSpace, pts: &[usize]) -> String {
    let v: Vec<&str> = pts.iter().map(|&p| space.points()[p].as_str()).collect();
    format!("[{}]", v.join(", "))
}

/// Conclusions audited for `theorem`. The T4 and T5 arguments use the
/// symmetry of G, so they are only asserted on symmetric streams.
fn conclusions(theorem: TheoremId, symmetric: bool) -> Vec<(&'static str, ConclusionStatus)> {
    use ConclusionStatus::{Asserted, ReportOnly};
    let sym = if symmetric { Asserted } else { ReportOnly };
    match theorem {
        TheoremId::T1 => vec![("existence", ReportOnly), ("convergence", ReportOnly), ("separation", Asserted)],
        TheoremId::T2 => vec![("unique_fixed_point", Asserted), ("convergence", Asserted), ("rate_bound", Asserted)],
        TheoremId::T3 => vec![("unique_fixed_point", Asserted), ("convergence", Asserted)],
        TheoremId::T4 => vec![("existence", sym), ("rate_bound", sym)],
        TheoremId::T5 => vec![("monotone_convergence", sym)],
    }
}

fn check_conclusions(inst: &Instance, symmetric: bool) -> Result<Vec<Outcome>> {
    use ConclusionStatus::{Asserted, ReportOnly};
    let (space, map) = (&inst.space, &inst.map);
    let fps = fixed_points(space, map)?;
    let sym_status = if symmetric { Asserted } else { ReportOnly };
    let mut out = Vec::new();
    match &inst.coeffs {
        Coeffs::None => {
            out.push(outcome(
                "existence",
                ReportOnly,
                fps.is_empty().then(|| "no fixed point".to_string()),
            ));
            let bad = non_convergent(space, map, None)?;
            out.push(outcome(
                "convergence",
                ReportOnly,
                (!bad.is_empty()).then(|| format!("orbits from {} do not reach a fixed point", labels(space, &bad))),
            ));
            if fps.len() >= 2 {
                let sep = separation_check(space, map, &fps)?;
                out.push(outcome(
                    "separation",
                    Asserted,
                    (!sep.bound_met).then(|| format!("fixed points {} closer than 1/3", labels(space, &fps))),
                ));
            }
        }
        Coeffs::T2(_) | Coeffs::T3(_) => {
            out.push(outcome(
                "unique_fixed_point",
                Asserted,
                (fps.len() != 1).then(|| format!("fixed points {}", labels(space, &fps))),
            ));
            let bad = non_convergent(space, map, fps.first().copied().filter(|_| fps.len() == 1))?;
            out.push(outcome(
                "convergence",
                Asserted,
                (!bad.is_empty()).then(|| format!("orbits from {} miss the fixed point", labels(space, &bad))),
            ));
            if let Coeffs::T2(c) = &inst.coeffs {
                let bad = rate_failures(space, map, &RateBound::T2(c.clone()))?;
                out.push(outcome(
                    "rate_bound",
                    Asserted,
                    (!bad.is_empty()).then(|| format!("step bound fails on orbits from {}", labels(space, &bad))),
                ));
            }
        }
        Coeffs::Seven(c) if inst.order.is_none() => {
            let bad = non_convergent(space, map, None)?;
            out.push(outcome(
                "existence",
                sym_status,
                (!bad.is_empty()).then(|| format!("orbits from {} leave a positive residual", labels(space, &bad))),
            ));
            let bad = rate_failures(space, map, &RateBound::T4(c.clone()))?;
            out.push(outcome(
                "rate_bound",
                sym_status,
                (!bad.is_empty()).then(|| format!("step bound fails on orbits from {}", labels(space, &bad))),
            ));
        }
        Coeffs::Seven(c) => {
            let order = inst.order.as_ref().expect("T5 instances carry an order");
            let mut bad = Vec::new();
            for x0 in 0..space.len() {
                if !order.leq(&x0, &map.at(x0)) {
                    continue;
                }
                let sol = solve_t5(space, order, map, c, x0, &Rational::zero(), space.len() + 1)?;
                if !(sol.monotone && sol.fixed) {
                    bad.push(x0);
                }
            }
            out.push(outcome(
                "monotone_convergence",
                sym_status,
                (!bad.is_empty()).then(|| format!("ordered orbits from {} fail", labels(space, &bad))),
            ));
        }
    }
    Ok(out)
}

fn certify_instance(theorem: TheoremId, inst: &Instance) -> Result<Certificate<Rational>> {
    let (s, m) = (&inst.space, &inst.map);
    match &inst.coeffs {
        Coeffs::None => certify::certify_t1(s, m),
        Coeffs::T2(c) => certify::certify_t2(s, m, c),
        Coeffs::T3(c) => certify::certify_t3(s, m, c),
        Coeffs::Seven(c) if theorem == TheoremId::T4 => certify::certify_t4(s, m, c),
        Coeffs::Seven(c) => {
            let order = inst.order.as_ref().expect("T5 instances carry an order");
            certify::certify_t5(s, order, m, c)
        }
    }
}

fn order_doc(o: &FiniteOrder) -> OrderDoc {
    OrderDoc {
        order: o.strict_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
    }
}

/// Generates `cfg.trials` instances, certifies each against `theorem`, and
/// audits the conclusions on every instance where the certificate holds.
/// Coefficients are sampled per trial unless `coeffs` fixes them.
pub fn falsify(theorem: TheoremId, cfg: &GenConfig, coeffs: Option<&CoeffDoc>) -> Result<FalsifyReport> {
    cfg.validate()?;
    let mut report = FalsifyReport {
        theorem,
        config: cfg.clone(),
        coeffs: coeffs.cloned(),
        trials_run: 0,
        hypothesis_hits: 0,
        non_monotone_maps: (theorem == TheoremId::T5).then_some(0),
        conclusion_checks: conclusions(theorem, cfg.symmetric)
            .into_iter()
            .map(|(name, status)| Conclusion {
                name,
                status,
                checked: 0,
                passed: 0,
                failed: 0,
            })
            .collect(),
        counterexample_count: 0,
        counterexamples: Vec::new(),
        aborted_at: None,
    };
    for trial in 0..cfg.trials {
        let inst = replay(theorem, cfg, coeffs, trial)?;
        report.trials_run += 1;
        let cert = match certify_instance(theorem, &inst) {
            Ok(c) => c,
            Err(Error::Hypothesis(_)) => {
                if let Some(n) = report.non_monotone_maps.as_mut() {
                    *n += 1;
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        if !cert.holds {
            continue;
        }
        report.hypothesis_hits += 1;
        let mut abort = false;
        for o in check_conclusions(&inst, cfg.symmetric)? {
            let entry = report
                .conclusion_checks
                .iter_mut()
                .find(|c| c.name == o.name)
                .expect("conclusions are registered up front");
            entry.checked += 1;
            let Some(detail) = o.failure else {
                entry.passed += 1;
                continue;
            };
            entry.failed += 1;
            report.counterexample_count += 1;
            abort |= o.status == ConclusionStatus::Asserted;
            if report.counterexamples.len() < COUNTEREXAMPLE_CAP {
                report.counterexamples.push(Counterexample {
                    trial,
                    seed: inst.seed,
                    conclusion: o.name,
                    status: o.status,
                    detail,
                    space: finite_space_doc(&inst.space),
                    map: finite_map_doc(&inst.map),
                    order: inst.order.as_ref().map(order_doc),
                    coeffs: inst.coeffs.to_doc(),
                    certificate: cert.clone(),
                });
            }
        }
        if abort {
            report.aborted_at = Some(trial);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcore::rat;

    fn cfg(seed: u64, trials: usize) -> GenConfig {
        GenConfig {
            seed,
            trials,
            ..GenConfig::default()
        }
    }

    #[test]
    fn injected_example_is_a_hit_with_separation() {
        let c = GenConfig {
            inject_example: true,
            ..cfg(1, 1)
        };
        let r = falsify(TheoremId::T1, &c, None).unwrap();
        assert_eq!(r.hypothesis_hits, 1);
        let sep = r.conclusion("separation").unwrap();
        assert_eq!((sep.checked, sep.passed), (1, 1));
    }

    #[test]
    fn constant_maps_have_one_fixed_point() {
        let doc = CoeffDoc {
            alpha: Some(RatText(rat(0, 1))),
            beta: Some(RatText(rat(1, 2))),
            ..CoeffDoc::default()
        };
        let r = falsify(TheoremId::T2, &cfg(3, 300), Some(&doc)).unwrap();
        assert!(r.hypothesis_hits > 0);
        assert_eq!(r.asserted_failures(), 0);
        assert_eq!(r.conclusion("unique_fixed_point").unwrap().passed, r.hypothesis_hits);
    }

    #[test]
    fn replay_matches_run() {
        let c = cfg(99, 40);
        let a = replay(TheoremId::T4, &c, None, 17).unwrap();
        let b = replay(TheoremId::T4, &c, None, 17).unwrap();
        assert_eq!(a.space, b.space);
        assert_eq!(a.map, b.map);
        assert_eq!(a.coeffs.to_doc(), b.coeffs.to_doc());
    }

    #[test]
    fn reports_are_deterministic() {
        for t in [TheoremId::T1, TheoremId::T3, TheoremId::T5] {
            let a = serde_json::to_string(&falsify(t, &cfg(5, 60), None).unwrap()).unwrap();
            let b = serde_json::to_string(&falsify(t, &cfg(5, 60), None).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn asserted_theorems_hold_on_small_runs() {
        for t in [TheoremId::T2, TheoremId::T3, TheoremId::T4, TheoremId::T5] {
            let r = falsify(t, &cfg(8, 200), None).unwrap();
            assert_eq!(r.asserted_failures(), 0, "{t}: {:?}", r.counterexamples);
            assert!(r.aborted_at.is_none());
        }
    }
}
