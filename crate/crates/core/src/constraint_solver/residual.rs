//! Residuals `exp(-F) J_n^k D` of a solved table, including constraint
//! families that were not used to solve it.
//!
//! `D` is assembled at weight `weight_max + h + 1` from the truncated `F`.
//! For `J_n^k`, a coefficient `eps^p t^R` is exact when
//! `|R| <= weight_max - nh - (h+1)k` and `floor((p+k+1)/2) <= g_max`: every
//! correlator it involves is then inside the table.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::table::{assemble_d, assemble_f, safe_eps_floor, Caps, CorrelatorTable};
use crate::boson_fock::extract_j_single;
use crate::error::Result;
use crate::exact_series::{fmt_rat, int, Monomial, Rational, TruncatedSeries};
use crate::period_picture::PhaseFactor;

/// Outcome for one operator `J_n^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualRow {
    pub k: u32,
    pub n: i64,
    /// Reliable window: t-weight <= `max_weight`, eps-power <= `max_eps`.
    pub max_weight: u32,
    pub max_eps: i32,
    /// Nonzero coefficients found inside the window.
    pub nonzero: usize,
    /// First offending coefficient, `monomial = value`.
    pub first: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    pub h: u32,
    pub caps: Caps,
    pub k_max: u32,
    /// Weight to which `D` was assembled.
    pub d_weight: u32,
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.nonzero == 0)
    }

    /// `(k, n, monomial = value)` of the first failure.
    pub fn first_failure(&self) -> Option<String> {
        self.rows
            .iter()
            .find(|r| r.nonzero > 0)
            .map(|r| format!("J^{}_{}: {}", r.k, r.n, r.first.clone().unwrap_or_default()))
    }
}

/// Every `J_n^k`, `1 <= k <= k_max`, whose reliable window is nonempty.
pub fn residual_operators(h: u32, caps: Caps, k_max: u32) -> Vec<(u32, i64, u32)> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut n = -(k as i64);
        loop {
            let w = caps.weight_max as i64 - n * h as i64 - ((h + 1) * k) as i64;
            if w < 0 {
                break;
            }
            out.push((k, n, w as u32));
            n += 1;
        }
    }
    out
}

fn by_weight(s: &TruncatedSeries, w_max: u32) -> Vec<Vec<(&Monomial, &Rational)>> {
    let mut out = vec![Vec::new(); w_max as usize + 1];
    for (m, c) in s.iter() {
        let w = m.weight();
        if w <= w_max {
            out[w as usize].push((m, c));
        }
    }
    out
}

/// Applies `J_n^k` for `1 <= k <= k_max` to `D` built from `table` and
/// checks the reliable window of `exp(-F) J D`.
pub fn residual_check(table: &CorrelatorTable, k_max: u32) -> Result<ResidualReport> {
    let h = table.h;
    let caps = table.caps;
    let d_weight = caps.weight_max + h + 1;
    let floor = safe_eps_floor(d_weight);
    let d = assemble_d(table, d_weight, floor)?;
    let e = assemble_f(table, caps.weight_max, floor)?.scale(&int(-1)).exp()?;
    let phase = PhaseFactor::new(h, k_max.max(1) + 1)?;
    let ops = residual_operators(h, caps, k_max);
    let rows: Vec<ResidualRow> = ops
        .par_iter()
        .map(|&(k, n, w_max)| {
            let mode_cap = d_weight + (h + 1) * (k + 1);
            let op = extract_j_single(h, k, n, mode_cap, &phase).reduced(h).with_dilaton(h).indexed();
            let max_eps = 2 * caps.g_max as i32 - k as i32;
            let x = op.apply(&d);
            let xs = by_weight(&x, w_max);
            let es = by_weight(&e, w_max);
            let mut q: HashMap<Monomial, Rational> = HashMap::new();
            for (w1, bucket) in xs.iter().enumerate() {
                for (m1, c1) in bucket {
                    for eb in es.iter().take(w_max as usize - w1 + 1) {
                        for (m2, c2) in eb {
                            if m1.eps_power() + m2.eps_power() > max_eps {
                                continue;
                            }
                            *q.entry(m1.mul(m2)).or_insert_with(Rational::zero) += *c1 * *c2;
                        }
                    }
                }
            }
            let bad: BTreeMap<Monomial, Rational> = q.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            ResidualRow {
                k,
                n,
                max_weight: w_max,
                max_eps,
                nonzero: bad.len(),
                first: bad.iter().next().map(|(m, c)| format!("{m} = {}", fmt_rat(c))),
            }
        })
        .collect();
    Ok(ResidualReport { h, caps, k_max, d_weight, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint_solver::solve::{solve_constraints, SolverConfig};

    #[test]
    fn empty_caps_are_vacuous() {
        let t = CorrelatorTable::new(2, Caps { g_max: 0, weight_max: 0 });
        let r = residual_check(&t, 3).unwrap();
        assert!(r.rows.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn solved_table_h2_small() {
        let s = solve_constraints(&SolverConfig::new(2, 1, 8)).unwrap();
        let r = residual_check(&s.table, 3).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert!(r.rows.iter().any(|row| row.k == 3));
    }

    #[test]
    fn perturbed_table_fails() {
        let s = solve_constraints(&SolverConfig::new(2, 1, 8)).unwrap();
        let mut t = s.table.clone();
        let key = Monomial::from_indices(&[1, 1, 1], 0);
        t.insert(0, key, int(2));
        let r = residual_check(&t, 1).unwrap();
        assert!(!r.passed());
    }
}
