//! Commutators of the bosonic operators `J_n^k`, measured on basis monomials
//! and compared with the bracket table of differential operators.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::extract::{extract_j, ExtractWindow, OperatorTable};
use super::modes::{basis_monomials, IndexedOperator};
use crate::error::Result;
use crate::exact_series::{fmt_rat, int, Monomial, Rational, TruncatedSeries};
use crate::fermion_wedge::{bracket_table, generators, CheckResult, Generator};

/// Probe window for the bracket check.
#[derive(Clone, Copy, Debug)]
pub struct BracketWindow {
    pub k_max: u32,
    pub n_window: i64,
    /// Weight of the basis monomials the commutators are evaluated on.
    pub probe_weight: u32,
}

/// Scalar left over after subtracting the predicted combination from
/// `[J_A, J_B]`, with the table's central value next to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketMeasurement {
    pub a: Generator,
    pub b: Generator,
    pub measured: Rational,
    pub expected: Rational,
}

fn op_key(g: Generator) -> (u32, i64) {
    (g.1, g.0)
}

/// `[J_A, J_B] D - sum coef J_C D` for one probe, or an error message if it
/// is not a multiple of `D`.
fn defect_on(
    ops: &BTreeMap<(u32, i64), IndexedOperator>,
    a: Generator,
    b: Generator,
    combination: &[(Generator, Rational)],
    probe: &TruncatedSeries,
    probe_monomial: &Monomial,
) -> std::result::Result<Rational, String> {
    let ja = &ops[&op_key(a)];
    let jb = &ops[&op_key(b)];
    let mut r = ja.apply(&jb.apply(probe)).sub(&jb.apply(&ja.apply(probe)));
    for (c, coef) in combination {
        let jc = ops.get(&op_key(*c)).ok_or_else(|| format!("J{c:?} outside the extracted window"))?;
        r = r.sub(&jc.apply(probe).scale(coef));
    }
    let scalar = r.coefficient(probe_monomial);
    let rest = r.sub(&probe.scale(&scalar));
    if !rest.is_zero() {
        return Err(format!("[J{a:?}, J{b:?}] leaves a non-scalar remainder on {probe_monomial}"));
    }
    Ok(scalar)
}

/// Measures every bracket `[J_A, J_B]`, `A < B` in the window, against the
/// table. Each pair is probed on all basis monomials of weight at most
/// `probe_weight` and the scalar must agree across probes.
pub fn check_bosonic_brackets(h: u32, window: BracketWindow) -> Result<(CheckResult, Vec<BracketMeasurement>)> {
    let mut res = CheckResult::new(format!(
        "bosonic brackets match the table, h = {h}, k <= {}, |n| <= {}",
        window.k_max, window.n_window
    ));
    let series_cap = window.probe_weight + 2 * window.n_window as u32 * h;
    let table = bracket_table(h, window.n_window, window.k_max);
    let ext = ExtractWindow {
        k_max: (2 * window.k_max).saturating_sub(1).max(window.k_max),
        n_window: 2 * window.n_window,
        weight_cap: series_cap,
    };
    let raw: OperatorTable = extract_j(h, ext)?;
    let ops: BTreeMap<(u32, i64), IndexedOperator> = raw.iter().map(|(k, p)| (*k, p.indexed())).collect();
    let probes: Vec<(Monomial, TruncatedSeries)> = basis_monomials(window.probe_weight, None)
        .into_iter()
        .map(|m| (m.clone(), TruncatedSeries::monomial(m, int(1), series_cap)))
        .collect();

    let gens = generators(window.n_window, window.k_max);
    let pairs: Vec<(Generator, Generator)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| gens.iter().skip(i + 1).map(move |&b| (a, b)))
        .collect();
    let rows: Vec<std::result::Result<BracketMeasurement, String>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let entry = &table[&(a, b)];
            let mut measured: Option<Rational> = None;
            for (m, p) in &probes {
                let s = defect_on(&ops, a, b, &entry.combination, p, m)?;
                match &measured {
                    None => measured = Some(s),
                    Some(prev) if *prev != s => {
                        return Err(format!("[J{a:?}, J{b:?}] scalar depends on the probe ({m})"));
                    }
                    _ => {}
                }
            }
            Ok(BracketMeasurement { a, b, measured: measured.unwrap_or_else(Rational::zero), expected: entry.central.clone() })
        })
        .collect();
    let mut out = Vec::new();
    for row in rows {
        res.cases += 1;
        match row {
            Ok(m) => {
                if m.measured != m.expected {
                    res.fail(format!(
                        "[J{:?}, J{:?}]: central {} expected {}",
                        m.a,
                        m.b,
                        fmt_rat(&m.measured),
                        fmt_rat(&m.expected)
                    ));
                }
                out.push(m);
            }
            Err(msg) => res.fail(msg),
        }
    }
    Ok((res, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_small_window() {
        for h in [2, 3] {
            let (r, rows) = check_bosonic_brackets(h, BracketWindow { k_max: 1, n_window: 1, probe_weight: 3 }).unwrap();
            assert!(r.passed(), "{r}");
            assert!(rows.iter().any(|m| !m.expected.is_zero()));
        }
    }
}
