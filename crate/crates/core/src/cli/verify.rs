//! Verification targets behind `wnk verify`, each a list of pass/fail checks.

use num_traits::Zero;

use crate::boson_fock::{
    basis_monomials, check_bosonic_brackets, extract_j_single, virasoro_closed_form, BracketWindow,
};
use crate::check::CheckResult;
use crate::constraint_solver::{
    residual_check, solve_constraints, Caps, CorrelatorTable, EliminationOrder, Insertion, SolverConfig,
};
use crate::error::{Error, Result};
use crate::exact_series::{fmt_rat, int, rat, Rational, TruncatedSeries};
use crate::fermion_wedge::bracket::{alpha, w_bracket, DiffOp};
use crate::fermion_wedge::{
    central_residue, central_term_with, check_anticommutators, check_projective_elementary,
    compare_generator_cocycles, Sector,
};
use crate::period_picture::{c_series, check_period_recurrence, check_operator_identities, PhaseFactor, IdentityConfig};

/// `c(s) = h + 0 s + (h^2-1)/(24h) s^2 - (h^2-1)/(24h) s^3 + ...`.
pub fn verify_c_series(hs: &[u32]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &h in hs {
        let mut res = CheckResult::new(format!("c(s) through s^3, h = {h}"));
        let c = c_series(h, 3)?;
        let a = rat((h * h - 1) as i64, 24 * h as i64);
        let expected = [int(h as i64), int(0), a.clone(), -a];
        for (j, e) in expected.iter().enumerate() {
            res.cases += 1;
            if c[j] != *e {
                res.fail(format!("s^{j}: {} expected {}", fmt_rat(&c[j]), fmt_rat(e)));
            }
        }
        out.push(res);
    }
    Ok(out)
}

/// Reduced `J^1_n` against the closed form on every basis monomial of weight
/// <= `weight_cap`, `|n| <= n_window`.
pub fn verify_virasoro(h: u32, n_window: i64, weight_cap: u32) -> Result<Vec<CheckResult>> {
    let phase = PhaseFactor::new(h, 2)?;
    let mode_cap = weight_cap + n_window as u32 * h;
    let series_cap = weight_cap + n_window as u32 * h;
    let monos = basis_monomials(weight_cap, None);
    let mut res = CheckResult::new(format!(
        "J^1 equals the closed form, h = {h}, |n| <= {n_window}, weight <= {weight_cap}"
    ));
    for n in -n_window..=n_window {
        let j = extract_j_single(h, 1, n, mode_cap, &phase).reduced(h).indexed();
        let c = virasoro_closed_form(h, n, mode_cap).indexed();
        for m in &monos {
            res.cases += 1;
            let s = TruncatedSeries::monomial(m.clone(), int(1), series_cap);
            if j.apply(&s) != c.apply(&s) {
                res.fail(format!("n = {n} on {m}"));
            }
        }
    }
    let mut constant = CheckResult::new(format!("J^1_0 constant is (h^2-1)/(24h), h = {h}"));
    constant.cases = 1;
    let c0 = extract_j_single(h, 1, 0, weight_cap, &phase).reduced(h).scalar_part();
    let expected = rat((h * h - 1) as i64, 24 * h as i64);
    if c0 != expected {
        constant.fail(format!("{} expected {}", fmt_rat(&c0), fmt_rat(&expected)));
    }
    Ok(vec![res, constant])
}

/// Bosonic brackets against the table, the fermionic images against the same
/// table, agreement of the two measured scalars, and uniqueness of the
/// pole-cancelling central constant.
pub fn verify_w_bracket(h: u32, k_max: u32, n_window: i64, probe_weight: u32, sector: Sector) -> Result<Vec<CheckResult>> {
    let (bos, bos_rows) = check_bosonic_brackets(h, BracketWindow { k_max, n_window, probe_weight })?;
    let (fer, fer_rows) = compare_generator_cocycles(h, n_window, k_max, sector)?;
    let mut cross = CheckResult::new(format!("bosonic and fermionic central scalars agree, h = {h}"));
    for f in &fer_rows {
        if let Some(b) = bos_rows.iter().find(|b| b.a == f.a && b.b == f.b) {
            cross.cases += 1;
            let (x, _) = w_bracket(&DiffOp::generator(f.a), &DiffOp::generator(f.b));
            if &b.measured + alpha(h, &x)? != f.measured {
                cross.fail(format!("{:?}, {:?}", f.a, f.b));
            }
        }
    }
    let mut unique = CheckResult::new(format!("K = h is the only pole-cancelling central constant, h = {h}"));
    let samples: Vec<Rational> = (-2..=2)
        .map(|d| int(h as i64 + d))
        .chain([rat(2 * h as i64 + 1, 2), int(0)])
        .collect();
    for k in &samples {
        unique.cases += 1;
        let residue = central_residue(h, k)?;
        let cancels = central_term_with(0, h, k, 3).is_ok();
        let is_h = *k == int(h as i64);
        if residue.is_zero() != is_h || cancels != is_h {
            unique.fail(format!("K = {}: residue {}", fmt_rat(k), fmt_rat(&residue)));
        }
        // the residue is affine in K, so a single zero is the only one
        if residue != k - int(h as i64) {
            unique.fail(format!("residue at K = {} is {}", fmt_rat(k), fmt_rat(&residue)));
        }
    }
    Ok(vec![bos, fer, cross, unique])
}

pub fn verify_identities(h: u32, cfg: IdentityConfig) -> Result<Vec<CheckResult>> {
    let report = check_operator_identities(h, cfg)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| CheckResult {
            label: format!("{}, h = {h}", c.label),
            cases: c.compared,
            failure: c.mismatch,
            vacuous: false,
        })
        .collect())
}

/// Solves with `k <= h-1` and checks every `J_n^k`, `k <= k_max`.
pub fn verify_residuals(h: u32, caps: Caps, k_max: u32) -> Result<(CorrelatorTable, Vec<CheckResult>)> {
    let table = solve_constraints(&SolverConfig::new(h, caps.g_max, caps.weight_max))?.table;
    let report = residual_check(&table, k_max)?;
    let mut res = CheckResult::new(format!(
        "residuals of J^k_n, k <= {k_max}, vanish in the reliable window, h = {h}, g <= {}, weight <= {}",
        caps.g_max, caps.weight_max
    ));
    res.cases = report.rows.len();
    res.vacuous = report.rows.is_empty();
    if let Some(f) = report.first_failure() {
        res.fail(f);
    }
    let mut beyond = CheckResult::new(format!("unused families k = {h}, {} checked, h = {h}", h + 1));
    beyond.cases = report.rows.iter().filter(|r| r.k >= h).count();
    beyond.vacuous = report.rows.is_empty();
    if let Some(r) = report.rows.iter().find(|r| r.k >= h && r.nonzero > 0) {
        beyond.fail(format!("J^{}_{}: {}", r.k, r.n, r.first.clone().unwrap_or_default()));
    }
    Ok((table, vec![res, beyond]))
}

pub fn verify_fermion(sector: Sector, matrix_window: i64) -> Vec<CheckResult> {
    vec![check_anticommutators(sector), check_projective_elementary(sector, matrix_window)]
}

pub fn verify_periods(h_max: u32, n_min: i64, n_max: i64) -> Vec<CheckResult> {
    vec![check_period_recurrence(h_max, n_min, n_max)]
}

fn same_values(a: &CorrelatorTable, b: &CorrelatorTable) -> std::result::Result<usize, String> {
    let mut n = 0;
    for (g, k, v) in a.iter() {
        n += 1;
        match b.get(g, k) {
            Some(w) if w == v => {}
            Some(w) => return Err(format!("genus {g} {k}: {} vs {}", fmt_rat(v), fmt_rat(w))),
            None => return Err(format!("genus {g} {k} missing")),
        }
    }
    if a.len() != b.len() {
        return Err(format!("{} entries vs {}", a.len(), b.len()));
    }
    Ok(n)
}

/// The `h = 2` table: lowest values, elimination-order and cutoff invariance.
pub fn verify_point_solver(g_max: u32, weight_max: u32) -> Result<Vec<CheckResult>> {
    let config = SolverConfig::new(2, g_max, weight_max);
    let table = solve_constraints(&config)?.table;
    let t0 = Insertion { i: 1, k: 0 };
    let t1 = Insertion { i: 1, k: 1 };
    let mut values = CheckResult::new("<tau_0^3>_0 = 1 and <tau_1>_1 = 1/24");
    for (g, ins, want) in [(0, vec![t0, t0, t0], int(1)), (1, vec![t1], rat(1, 24))] {
        if g > g_max {
            continue;
        }
        values.cases += 1;
        match table.value(g, &ins) {
            Some(v) if *v == want => {}
            other => values.fail(format!("genus {g}: {:?}", other.map(fmt_rat))),
        }
    }
    let mut order = CheckResult::new("table invariant under genus-major elimination");
    let genus_major = solve_constraints(&SolverConfig { order: EliminationOrder::GenusMajor, ..config.clone() })?.table;
    match same_values(&table, &genus_major) {
        Ok(n) => order.cases = n,
        Err(e) => order.fail(e),
    }
    let mut cutoff = CheckResult::new(format!("table invariant under weight cap {} -> {}", weight_max, weight_max + 2));
    let bigger = solve_constraints(&SolverConfig::new(2, g_max, weight_max + 2))?.table.restricted(table.caps);
    match same_values(&table, &bigger) {
        Ok(n) => cutoff.cases = n,
        Err(e) => cutoff.fail(e),
    }
    Ok(vec![values, order, cutoff])
}

/// Exit status for a list of checks: 0 all pass, 1 any failure, 4 any
/// skipped check and no failure.
pub fn exit_code(checks: &[CheckResult]) -> i32 {
    if checks.iter().any(|c| !c.passed() && !c.skipped()) {
        1
    } else if checks.iter().any(|c| c.skipped()) {
        4
    } else {
        0
    }
}

pub(crate) fn solver_exit_code(e: &Error) -> i32 {
    match e {
        Error::NoPivot { .. } => 2,
        Error::Inconsistent { .. } => 3,
        _ => 1,
    }
}
