//! End-to-end run of the built-in examples as a plain-text table.

use gfp_core::certify::{certify_t1, certify_t4, certify_t5, evaluate_at, Coeff, Condition};
use gfp_core::corder::{check_nondecreasing, solve_t5, NumericOrder};
use gfp_core::corpus;
use gfp_core::gcore::{check_axioms, rat, GSpace, GValue};
use gfp_core::solve::{fixed_points, iterate, rate_estimate, separation_check, Termination};
use gfp_core::Result;

use crate::out_line;

struct Row {
    example: &'static str,
    check: &'static str,
    value: String,
    expected: &'static str,
    ok: bool,
}

fn row(example: &'static str, check: &'static str, value: String, expected: &'static str, ok: bool) -> Row {
    Row {
        example,
        check,
        value,
        expected,
        ok,
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn example1(rows: &mut Vec<Row>) -> Result<()> {
    const EX: &str = "example-1";
    let (s, m) = (corpus::example1_space(), corpus::example1_map());
    let ax = check_axioms(&s).all_pass;
    rows.push(row(EX, "axioms G1-G5, SYM", yes_no(ax), "yes", ax));
    let cert = certify_t1(&s, &m)?;
    let ok = cert.holds && cert.triples_checked == 27;
    rows.push(row(
        EX,
        "t1 holds (triples)",
        format!("{} ({})", yes_no(cert.holds), cert.triples_checked),
        "yes (27)",
        ok,
    ));
    for (label, t, want, expected) in [
        ("t1 bound at (0,1/2,1/2)", [0, 1, 1], rat(48, 1), "48"),
        ("t1 bound at (0,1,1)", [0, 2, 2], rat(108, 13), "108/13"),
        ("t1 bound at (1/2,1,1)", [1, 2, 2], rat(100, 13), "100/13"),
    ] {
        let sides = evaluate_at(&s, &m, &Condition::T1, [&t[0], &t[1], &t[2]])?;
        let rhs = sides.rhs.expect("real values are comparable");
        rows.push(row(EX, label, rhs.render(), expected, rhs == GValue::from_rational(&want)));
    }
    let fps = fixed_points(&s, &m)?;
    let labels: Vec<String> = fps.iter().map(|p| s.label(p)).collect();
    rows.push(row(
        EX,
        "fixed points",
        format!("{{{}}}", labels.join(", ")),
        "{0, 1/2}",
        fps == [0, 1],
    ));
    let sep = separation_check(&s, &m, &fps)?;
    let min = sep.min_pairwise.clone().map(|v| v.render()).unwrap_or_default();
    let ok = sep.bound_met && sep.min_pairwise == Some(GValue::from_rational(&rat(4, 1)));
    rows.push(row(EX, "min pairwise G >= 1/3", min, "4", ok));
    Ok(())
}

fn interval(rows: &mut Vec<Row>) -> Result<()> {
    const EX: &str = "interval";
    let (s, m) = corpus::interval_example();
    let t = iterate(&s, &m, corpus::INTERVAL_X0, &1e-9, 10_000)?;
    let limit = t.limit.unwrap_or(f64::NAN);
    let ok = t.terminated == Termination::Converged && (limit - 2.0).abs() < 1e-6 && t.d.len() <= 200;
    rows.push(row(
        EX,
        "limit from 1.6 (steps)",
        format!("{limit:.9} ({})", t.d.len()),
        "2 (<= 200)",
        ok,
    ));
    let rate = rate_estimate::<f64, f64>(&t.d, None).observed;
    rows.push(row(
        EX,
        "observed rate",
        format!("{rate:.4}"),
        "0.70..0.80",
        (0.70..=0.80).contains(&rate),
    ));
    let cert = certify_t4(&s, &m, &corpus::interval_coeffs())?;
    rows.push(row(
        EX,
        "t4 holds on grid",
        format!("{} ({})", yes_no(cert.holds), cert.grid.unwrap_or(0)),
        "yes (64)",
        cert.holds,
    ));
    Ok(())
}

fn complex(rows: &mut Vec<Row>) -> Result<()> {
    const EX: &str = "complex";
    let (s, m) = corpus::complex_example();
    let c = corpus::complex_coeffs();
    let sol = solve_t5(&s, &NumericOrder, &m, &c, corpus::INTERVAL_X0, &1e-9, 10_000)?;
    let first = sol.trace.points.get(1).copied().unwrap_or(f64::NAN);
    rows.push(row(EX, "first step from 1.6", format!("{first}"), "1.81", first == 1.81));
    rows.push(row(EX, "orbit nondecreasing", yes_no(sol.monotone), "yes", sol.monotone));
    let limit = sol.trace.limit.unwrap_or(f64::NAN);
    let residual = sol.trace.residual.as_ref().map_or(f64::NAN, |r| r.re.max(r.im));
    let ok = sol.fixed && (limit - 2.0).abs() < 1e-6 && residual < 1e-6;
    rows.push(row(
        EX,
        "limit (residual)",
        format!("{limit:.9} ({residual:.1e})"),
        "2 (< 1e-6)",
        ok,
    ));
    let mono = check_nondecreasing(&s, &NumericOrder, &m)?;
    rows.push(row(EX, "map nondecreasing", yes_no(mono.holds), "yes", mono.holds));
    let cert = certify_t5(&s, &NumericOrder, &m, &c)?;
    rows.push(row(
        EX,
        "t5 holds, a1=3/4",
        format!("{} ({})", yes_no(cert.holds), cert.grid.unwrap_or(0)),
        "yes (64)",
        cert.holds,
    ));
    // Near x = 7/4 from the left with y = z = 1.81 the bound needs a1 > 0.875.
    let mut wider = c.clone();
    wider.a[0] = Coeff::Const(rat(9, 10));
    let cert = certify_t5(&s, &NumericOrder, &m, &wider)?;
    rows.push(row(
        EX,
        "t5 holds, a1=9/10",
        format!("{} ({})", yes_no(cert.holds), cert.grid.unwrap_or(0)),
        "yes (64)",
        cert.holds,
    ));
    Ok(())
}

/// Prints the table; `Ok(false)` when any row misses its expectation.
pub fn run() -> Result<bool> {
    let mut rows = Vec::new();
    example1(&mut rows)?;
    interval(&mut rows)?;
    complex(&mut rows)?;
    let w = |f: &dyn Fn(&Row) -> usize, h: &str| rows.iter().map(f).max().unwrap_or(0).max(h.len());
    let w0 = w(&|r| r.example.len(), "example");
    let w1 = w(&|r| r.check.len(), "check");
    let w2 = w(&|r| r.value.len(), "value");
    let w3 = w(&|r| r.expected.len(), "expected");
    out_line(&format!("{:w0$}  {:w1$}  {:w2$}  {:w3$}  ok", "example", "check", "value", "expected"));
    for r in &rows {
        out_line(&format!(
            "{:w0$}  {:w1$}  {:w2$}  {:w3$}  {}",
            r.example,
            r.check,
            r.value,
            r.expected,
            yes_no(r.ok)
        ));
    }
    Ok(rows.iter().all(|r| r.ok))
}
