//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::time::Instant;

use wnk::check::CheckResult;
use wnk::cli::verify;
use wnk::constraint_solver::{residual_check, solve_constraints, Caps, SolverConfig};
use wnk::exact_series::{fmt_rat, int, rat};
use wnk::fermion_wedge::Sector;
use wnk::period_picture::{c_series, IdentityConfig};
use wnk::Result;

struct Outcome {
    detail: Vec<String>,
    failures: Vec<String>,
}

fn collect(checks: Vec<CheckResult>) -> Outcome {
    let mut out = Outcome { detail: Vec::new(), failures: Vec::new() };
    for c in checks {
        if !c.passed() {
            out.failures.push(c.to_string());
        }
        out.detail.push(c.to_string());
    }
    out
}

fn c_series_low_order() -> Result<Outcome> {
    let mut checks = Vec::new();
    for h in 2..=6u32 {
        let mut res = CheckResult::new(format!("h = {h}"));
        let c = c_series(h, 3)?;
        let a = rat((h * h - 1) as i64, 24 * h as i64);
        for (j, want) in [int(h as i64), int(0), a.clone(), -a].iter().enumerate() {
            res.cases += 1;
            if c[j] != *want {
                res.fail(format!("s^{j}: {} vs {}", fmt_rat(&c[j]), fmt_rat(want)));
            }
        }
        checks.push(res);
    }
    Ok(collect(checks))
}

fn virasoro_closed_form() -> Result<Outcome> {
    let mut checks = verify::verify_virasoro(2, 3, 12)?;
    checks.extend(verify::verify_virasoro(3, 3, 12)?);
    Ok(collect(checks))
}

fn bracket_consistency() -> Result<Outcome> {
    let sector = Sector { max_charge: 1, max_energy: 6 };
    let mut checks = verify::verify_w_bracket(2, 2, 3, 6, sector)?;
    checks.extend(verify::verify_w_bracket(3, 2, 3, 6, sector)?);
    Ok(collect(checks))
}

fn operator_identities() -> Result<Outcome> {
    let cfg = IdentityConfig { n_window: 3, s_order: 4, weight_cap: 10 };
    let mut checks = verify::verify_identities(2, cfg)?;
    checks.extend(verify::verify_identities(3, cfg)?);
    Ok(collect(checks))
}

fn solver_point() -> Result<Outcome> {
    Ok(collect(verify::verify_point_solver(2, 18)?))
}

fn redundant_constraints() -> Result<Outcome> {
    let mut checks = Vec::new();
    for (h, caps) in [(2, Caps { g_max: 2, weight_max: 18 }), (3, Caps { g_max: 1, weight_max: 12 })] {
        let table = solve_constraints(&SolverConfig::new(h, caps.g_max, caps.weight_max))?.table;
        let report = residual_check(&table, h + 1)?;
        let mut res = CheckResult::new(format!("h = {h}, J^k_n for k <= {}", h + 1));
        res.cases = report.rows.len();
        for k in [h, h + 1] {
            if !report.rows.iter().any(|r| r.k == k) {
                res.fail(format!("no J^{k} in the reliable window"));
            }
        }
        if let Some(f) = report.first_failure() {
            res.fail(f);
        }
        checks.push(res);
    }
    Ok(collect(checks))
}

fn fermion_relations() -> Result<Outcome> {
    Ok(collect(verify::verify_fermion(Sector { max_charge: 2, max_energy: 8 }, 2)))
}

fn period_recurrence() -> Result<Outcome> {
    Ok(collect(verify::verify_periods(6, -6, 6)))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 8] = [
        ("c(s) through s^3 for h = 2..6", c_series_low_order),
        ("reduced J^1 equals the closed form, h = 2, 3, weight <= 12, |n| <= 3", virasoro_closed_form),
        ("bosonic brackets match the fermionic ground truth, K = h unique", bracket_consistency),
        ("operator identities, h = 2, 3, cap 10, s-order 4, |n| <= 3", operator_identities),
        ("h = 2 solver values, order and cutoff invariance", solver_point),
        ("unused constraint families vanish, h = 2, 3", redundant_constraints),
        ("fermion anticommutators and projectivity, energy <= 8, |m| <= 2", fermion_relations),
        ("period recurrence, -6 <= n <= 6, h <= 6", period_recurrence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(o) if o.failures.is_empty() => {
                println!("PASS {}: {name} ({secs:.1}s)", i + 1);
                for d in &o.detail {
                    println!("    {d}");
                }
            }
            Ok(o) => {
                failed += 1;
                println!("FAIL {}: {name} ({secs:.1}s)", i + 1);
                for d in &o.failures {
                    println!("    {d}");
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL {}: {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
