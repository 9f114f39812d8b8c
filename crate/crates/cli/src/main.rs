//! `gfp`: G-metric axiom checks, contraction certificates, Picard iteration
//! and seeded falsification from JSON documents.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage, I/O or document error.

mod examples;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gfp_core::certify::{self, Certificate, Condition, TheoremId};
use gfp_core::corder::{solve_t5, FiniteOrder, NumericOrder, PointOrder};
use gfp_core::doc::{self, CoeffDoc, LoadedMap, Space};
use gfp_core::gcore::{
    check_axioms, is_g_cauchy, parse_real, GSpace, Rational, Scalar, SelfMap, DEFAULT_TAIL,
};
use gfp_core::gen::{falsify, GenConfig, GenMode};
use gfp_core::solve::{
    alpha_monotonicity, check_orbital_continuity, fixed_points, iterate, rate_estimate,
    separation_check, RateBound, Termination, TraceDoc, DEFAULT_EPS_INTERVAL, DEFAULT_MAX_ITER,
};
use gfp_core::Error;

#[derive(Parser)]
#[command(name = "gfp", version, about = "Fixed points of rational-type contractions on G-metric spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check (G1) to (G5) and symmetry.
    Check {
        #[arg(long)]
        space: PathBuf,
        /// Override the sampling grid of an interval space.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Certify a contraction condition over all (or all grid) triples.
    Certify {
        #[arg(long)]
        theorem: TheoremId,
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Picard iteration with d_n and alpha_n diagnostics.
    Solve {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Starting point: a label or index (finite) or a number (interval).
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Window for the Cauchy check on the final entries.
        #[arg(long, default_value_t = DEFAULT_TAIL)]
        tail: usize,
        /// Run the ordered (monotone-orbit) solver; needs --coeffs.
        #[arg(long)]
        t5: bool,
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long)]
        order: Option<PathBuf>,
    },
    /// Fixed points of a finite map, their separation and orbit structure.
    FixedPoints {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Audit a theorem's conclusions on seeded random finite instances.
    Falsify {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point count `K` or range `A..B` (inclusive).
        #[arg(long, default_value = "3..5")]
        points: String,
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long, default_value = "from-metric-max")]
        mode: GenMode,
        /// Generate spaces that need not be symmetric.
        #[arg(long)]
        nonsymmetric: bool,
        /// Use the built-in three-point example as trial 0 (t1 only).
        #[arg(long)]
        inject_example: bool,
    },
    /// Run the built-in examples end to end and print a summary.
    Examples,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    map: PathBuf,
}

/// A failure carrying its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Hypothesis(_) => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

type Out = Result<bool, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: gfp_core::Result<T>) -> Result<T, Fail> {
    r.map_err(|e| {
        let f = Fail::from(e);
        Fail(f.0, format!("{}: {}", path.display(), f.1))
    })
}

fn emit<T: Serialize>(v: &T) -> Result<(), Fail> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Fail(2, e.to_string()))?;
    out_line(&s);
    Ok(())
}

/// Writes one line to stdout; a closed pipe is not an error.
pub(crate) fn out_line(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn load_space(path: &Path, grid: Option<usize>) -> Result<Space, Fail> {
    let space = in_file(path, doc::load_space(&read(path)?))?;
    match (space, grid) {
        (Space::Interval(s), Some(g)) => Ok(Space::Interval(s.with_grid(g)?)),
        (s, _) => Ok(s),
    }
}

fn load_instance(a: &InstanceArgs, grid: Option<usize>) -> Result<(Space, LoadedMap), Fail> {
    let space = load_space(&a.space, grid)?;
    let map = in_file(&a.map, doc::load_map(&read(&a.map)?, &space))?;
    Ok((space, map))
}

fn load_coeffs(path: &Option<PathBuf>) -> Result<Option<CoeffDoc>, Fail> {
    path.as_ref()
        .map(|p| in_file(p, doc::load_coeffs(&read(p)?)))
        .transpose()
}

fn load_order(path: &Option<PathBuf>, n: usize) -> Result<Option<FiniteOrder>, Fail> {
    path.as_ref()
        .map(|p| in_file(p, doc::load_order(&read(p)?, n)))
        .transpose()
}

fn warn_axioms<Sp: GSpace>(space: &Sp) {
    let failing = check_axioms(space).failing();
    if !failing.is_empty() {
        eprintln!("warning: space fails {}; certifying anyway", failing.join(", "));
    }
}

fn condition<P>(theorem: TheoremId, coeffs: Option<&CoeffDoc>) -> Result<Condition<P>, Fail> {
    let need = || Fail(2, format!("{theorem} needs --coeffs"));
    Ok(match theorem {
        TheoremId::T1 => Condition::T1,
        TheoremId::T2 => Condition::T2(coeffs.ok_or_else(need)?.t2()?),
        TheoremId::T3 => Condition::T3(coeffs.ok_or_else(need)?.t3()?),
        TheoremId::T4 => Condition::T4(coeffs.ok_or_else(need)?.seven()?),
        TheoremId::T5 => Condition::T5(coeffs.ok_or_else(need)?.seven()?),
    })
}

fn run_certify<Sp, M, O>(space: &Sp, map: &M, cond: &Condition<Sp::Point>, order: Option<&O>) -> Out
where
    Sp: GSpace,
    M: SelfMap<Sp::Point>,
    O: PointOrder<Sp::Point>,
{
    warn_axioms(space);
    let cert: Certificate<Sp::Scalar> = certify::certify(space, map, cond, order)?;
    emit(&cert)?;
    Ok(cert.holds)
}

fn cmd_certify(
    theorem: TheoremId,
    inst: &InstanceArgs,
    coeffs: &Option<PathBuf>,
    order: &Option<PathBuf>,
    grid: Option<usize>,
) -> Out {
    let (space, map) = load_instance(inst, grid)?;
    let coeffs = load_coeffs(coeffs)?;
    match (space, map) {
        (Space::Finite(s), LoadedMap::Finite(m)) => {
            let cond = condition(theorem, coeffs.as_ref())?;
            let order = load_order(order, s.len())?;
            if theorem == TheoremId::T5 && order.is_none() {
                return Err(Fail(2, "t5 on a finite space needs --order".into()));
            }
            run_certify(&s, &m, &cond, order.as_ref())
        }
        (Space::Interval(s), LoadedMap::Piecewise(m)) => {
            let cond = condition(theorem, coeffs.as_ref())?;
            run_certify(&s, &m, &cond, Some(&NumericOrder))
        }
        _ => unreachable!("maps are bound to their space kind"),
    }
}

#[derive(Serialize)]
#[serde(bound(serialize = ""))]
struct SolveReport<P, S: Scalar> {
    #[serde(flatten)]
    trace: TraceDoc<S>,
    cycle_detected: bool,
    cauchy_tail: Option<bool>,
    alpha_report: gfp_core::solve::AlphaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<gfp_core::solve::RateEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t5: Option<gfp_core::corder::T5Solution<P, S>>,
}

#[allow(clippy::too_many_arguments)]
fn solve_on<Sp, M, O>(
    space: &Sp,
    map: &M,
    x0: Sp::Point,
    eps: Sp::Scalar,
    max_iter: usize,
    tail: usize,
    coeffs: Option<&CoeffDoc>,
    t5_order: Option<&O>,
) -> Out
where
    Sp: GSpace,
    Sp::Point: Clone,
    M: SelfMap<Sp::Point>,
    O: PointOrder<Sp::Point>,
{
    let mut t5 = None;
    let trace = match t5_order {
        Some(order) => {
            let c = coeffs
                .ok_or_else(|| Fail(2, "--t5 needs --coeffs".into()))?
                .seven()?;
            let sol = solve_t5(space, order, map, &c, x0, &eps, max_iter)?;
            let trace = sol.trace.clone();
            t5 = Some(sol);
            trace
        }
        None => iterate(space, map, x0, &eps, max_iter)?,
    };
    let bound = match coeffs {
        Some(c) if c.alpha.is_some() => Some(RateBound::<Sp::Point>::T2(c.t2()?)),
        Some(c) if c.a.as_ref().is_some_and(|a| a.len() == 7) => Some(RateBound::T4(c.seven()?)),
        _ => None,
    };
    let rate = coeffs.map(|_| rate_estimate(&trace.d, bound.as_ref()));
    let cauchy_tail = (trace.points.len() > tail)
        .then(|| is_g_cauchy(&trace.points, space, &eps_or_tol(&eps), tail))
        .transpose()?;
    let report = SolveReport {
        trace: trace.to_doc(space),
        cycle_detected: trace.terminated == Termination::CycleDetected,
        cauchy_tail,
        alpha_report: alpha_monotonicity(&trace.alpha),
        rate,
        t5,
    };
    emit(&report)?;
    Ok(trace.terminated == Termination::Converged)
}

/// The Cauchy window needs a positive threshold; exact runs use the
/// smallest positive step instead of zero.
fn eps_or_tol<S: Scalar>(eps: &S) -> S {
    if eps.is_zero() {
        S::from_rational(&Rational::new(1.into(), 1_000_000_000.into()))
    } else {
        eps.clone()
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    inst: &InstanceArgs,
    x0: &str,
    eps: &Option<String>,
    max_iter: usize,
    tail: usize,
    t5: bool,
    coeffs: &Option<PathBuf>,
    order: &Option<PathBuf>,
) -> Out {
    let (space, map) = load_instance(inst, None)?;
    let coeffs = load_coeffs(coeffs)?;
    let bad_eps = |e: &str| Fail(2, format!("invalid --eps {e:?}"));
    match (space, map) {
        (Space::Finite(s), LoadedMap::Finite(m)) => {
            let start = match s.index_of(x0) {
                Ok(i) => i,
                Err(_) => x0
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| i < s.len())
                    .ok_or_else(|| Fail(2, format!("unknown point {x0:?}")))?,
            };
            let eps = match eps {
                Some(e) => gfp_core::gcore::parse_rational(e).ok_or_else(|| bad_eps(e))?,
                None => Rational::from_integer(0.into()),
            };
            let order = if t5 {
                Some(
                    load_order(order, s.len())?
                        .ok_or_else(|| Fail(2, "--t5 on a finite space needs --order".into()))?,
                )
            } else {
                None
            };
            solve_on(&s, &m, start, eps, max_iter, tail, coeffs.as_ref(), order.as_ref())
        }
        (Space::Interval(s), LoadedMap::Piecewise(m)) => {
            let start = parse_real(x0).ok_or_else(|| Fail(2, format!("invalid --x0 {x0:?}")))?;
            let eps = match eps {
                Some(e) => parse_real(e).filter(|v| *v > 0.0).ok_or_else(|| bad_eps(e))?,
                None => DEFAULT_EPS_INTERVAL,
            };
            let order = t5.then_some(NumericOrder);
            solve_on(&s, &m, start, eps, max_iter, tail, coeffs.as_ref(), order.as_ref())
        }
        _ => unreachable!("maps are bound to their space kind"),
    }
}

#[derive(Serialize)]
struct FixedPointsReport {
    fixed_points: Vec<String>,
    separation: gfp_core::solve::SeparationReport,
    orbital_continuity: gfp_core::solve::OrbitalContinuity,
}

fn cmd_fixed_points(inst: &InstanceArgs) -> Out {
    let (space, map) = load_instance(inst, None)?;
    let (Space::Finite(s), LoadedMap::Finite(m)) = (space, map) else {
        return Err(Fail(2, "fixed-points needs a finite space".into()));
    };
    let fps = fixed_points(&s, &m)?;
    let separation = separation_check(&s, &m, &fps)?;
    let report = FixedPointsReport {
        fixed_points: fps.iter().map(|&p| s.label(&p)).collect(),
        orbital_continuity: check_orbital_continuity(&s, &m)?,
        separation,
    };
    emit(&report)?;
    Ok(report.separation.bound_met)
}

fn parse_points(s: &str) -> Result<(usize, usize), Fail> {
    let bad = || Fail(2, format!("invalid --points {s:?}, expected K or A..B"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let k = parse(s)?;
            Ok((k, k))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_falsify(
    theorem: TheoremId,
    trials: usize,
    seed: u64,
    points: &str,
    coeffs: &Option<PathBuf>,
    mode: GenMode,
    nonsymmetric: bool,
    inject_example: bool,
) -> Out {
    let (min_points, max_points) = parse_points(points)?;
    let cfg = GenConfig {
        min_points,
        max_points,
        mode,
        seed,
        trials,
        symmetric: !nonsymmetric,
        inject_example,
        ..GenConfig::default()
    };
    let coeffs = load_coeffs(coeffs)?;
    let report = falsify(theorem, &cfg, coeffs.as_ref())?;
    emit(&report)?;
    Ok(report.aborted_at.is_none())
}

fn run(cli: Cli) -> Out {
    match &cli.cmd {
        Cmd::Check { space, grid } => {
            let report = match load_space(space, *grid)? {
                Space::Finite(s) => check_axioms(&s),
                Space::Interval(s) => check_axioms(&s),
            };
            emit(&report)?;
            Ok(report.all_pass)
        }
        Cmd::Certify {
            theorem,
            inst,
            coeffs,
            order,
            grid,
        } => cmd_certify(*theorem, inst, coeffs, order, *grid),
        Cmd::Solve {
            inst,
            x0,
            eps,
            max_iter,
            tail,
            t5,
            coeffs,
            order,
        } => cmd_solve(inst, x0, eps, *max_iter, *tail, *t5, coeffs, order),
        Cmd::FixedPoints { inst } => cmd_fixed_points(inst),
        Cmd::Falsify {
            theorem,
            trials,
            seed,
            points,
            coeffs,
            mode,
            nonsymmetric,
            inject_example,
        } => cmd_falsify(
            *theorem,
            *trials,
            *seed,
            points,
            coeffs,
            *mode,
            *nonsymmetric,
            *inject_example,
        ),
        Cmd::Examples => examples::run().map_err(Fail::from),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
