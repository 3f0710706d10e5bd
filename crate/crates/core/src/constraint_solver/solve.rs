//! Graded elimination of the constraints `J_n^k D = 0`.

use std::collections::{BTreeMap, BTreeSet};

use log::{debug, info};
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::equations::{coefficient, ConstraintOperator, CorrelatorSource, Lookup};
use super::table::{correlator_keys, f_coefficient, render_insertions, Caps, CorrelatorTable, IndexSet};
use crate::boson_fock::extract_j_single;
use crate::error::{Error, Result};
use crate::exact_series::{fmt_rat, Monomial, Rational};
use crate::period_picture::PhaseFactor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EliminationOrder {
    /// `(weight, genus, insertions)`.
    WeightMajor,
    /// `(genus, weight, insertions)`.
    GenusMajor,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub h: u32,
    pub caps: Caps,
    /// Constraint families used; the default is `1..=h-1`.
    pub k_set: Vec<u32>,
    pub order: EliminationOrder,
    /// Evaluate every usable equation, not just the first, and require
    /// agreement.
    pub cross_check: bool,
}

impl SolverConfig {
    pub fn new(h: u32, g_max: u32, weight_max: u32) -> Self {
        Self {
            h,
            caps: Caps { g_max, weight_max },
            k_set: (1..h).collect(),
            order: EliminationOrder::WeightMajor,
            cross_check: true,
        }
    }
}

/// Reduced, dilaton-shifted constraint operators `J_n^k` for `k` in `k_set`,
/// `-k <= n <= n_max`, exact on every equation whose correlators have
/// weight <= `weight_max`.
pub fn constraint_operators(
    h: u32,
    k_set: &[u32],
    weight_max: u32,
) -> Result<BTreeMap<(u32, i64), ConstraintOperator>> {
    let k_max = k_set.iter().copied().max().unwrap_or(0);
    let phase = PhaseFactor::new(h, k_max + 1)?;
    let mode_cap = weight_max + (h + 1) * (k_max + 1);
    let mut keys = Vec::new();
    for &k in k_set {
        let n_max = weight_max as i64 / h as i64;
        for n in -(k as i64)..=n_max {
            keys.push((k, n));
        }
    }
    let ops: Vec<((u32, i64), ConstraintOperator)> = keys
        .par_iter()
        .map(|&(k, n)| {
            let p = extract_j_single(h, k, n, mode_cap, &phase).reduced(h).with_dilaton(h);
            ((k, n), ConstraintOperator::new(k, n, &p))
        })
        .collect();
    Ok(ops.into_iter().collect())
}

struct Lookups<'a> {
    h: u32,
    known: &'a BTreeMap<(u32, IndexSet), Rational>,
    target: &'a (u32, IndexSet),
}

impl CorrelatorSource for Lookups<'_> {
    fn f_value(&self, g: u32, key: &Monomial) -> Lookup {
        if key.is_t_constant() || key.vars().iter().any(|&(m, _)| m % self.h == 0) {
            return Lookup::Known(Rational::zero());
        }
        if g == self.target.0 && *key == self.target.1 {
            return Lookup::Target(f_coefficient(self.h, key, &Rational::one()));
        }
        match self.known.get(&(g, key.clone())) {
            Some(v) => Lookup::Known(f_coefficient(self.h, key, v)),
            None => Lookup::Unknown,
        }
    }
}

/// The equation that fixed a correlator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub k: u32,
    pub n: i64,
    pub eps_power: i32,
    pub monomial: Monomial,
}

impl std::fmt::Display for Pivot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[eps^{} {}] J^{}_{}", self.eps_power, self.monomial, self.k, self.n)
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub table: CorrelatorTable,
    pub pivots: BTreeMap<(u32, IndexSet), Pivot>,
    /// Number of non-pivot equations that were evaluated and agreed.
    pub agreeing_equations: usize,
}

/// Candidate equations for a target, most promising first: remove one
/// insertion index `m` (largest first) and try every constraint family and
/// eps-power whose degree count can reach the target.
fn candidates(h: u32, g: u32, key: &IndexSet, k_set: &[u32], weight_max: u32) -> Vec<Pivot> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for &(m, _) in key.vars().iter().rev() {
        let r = key.divide(&Monomial::var(m)).expect("m divides key");
        if !seen.insert(r.clone()) {
            continue;
        }
        for &k in k_set {
            let spread = k as i32 + 1;
            let p0 = 2 * g as i32 - 2;
            for n in -(k as i64)..=(weight_max as i64 / h as i64) {
                if r.weight() as i64 + n * h as i64 + ((h + 1) * k) as i64 > weight_max as i64 {
                    continue;
                }
                for p in p0 - spread..=p0 + spread {
                    out.push(Pivot { k, n, eps_power: p, monomial: r.clone() });
                }
            }
        }
    }
    out
}

fn describe(g: u32, key: &IndexSet, table: &CorrelatorTable) -> String {
    format!("genus {g} {}", render_insertions(&table.insertions(key)))
}

/// Determines every correlator with genus <= `g_max` and weight <=
/// `weight_max` from the constraints in `k_set`.
pub fn solve_constraints(config: &SolverConfig) -> Result<Solution> {
    let h = config.h;
    if h < 2 {
        return Err(Error::InvalidArgument(format!("h must be at least 2, got {h}")));
    }
    let caps = config.caps;
    let ops = constraint_operators(h, &config.k_set, caps.weight_max)?;
    let mut keys = correlator_keys(h, caps);
    match config.order {
        EliminationOrder::WeightMajor => keys.sort_by(|a, b| (a.1.weight(), a.0, &a.1).cmp(&(b.1.weight(), b.0, &b.1))),
        EliminationOrder::GenusMajor => keys.sort_by(|a, b| (a.0, a.1.weight(), &a.1).cmp(&(b.0, b.1.weight(), &b.1))),
    }
    info!("solving {} correlators, h = {h}, caps {:?}", keys.len(), caps);
    let mut table = CorrelatorTable::new(h, caps);
    let mut known: BTreeMap<(u32, IndexSet), Rational> = BTreeMap::new();
    let mut pivots = BTreeMap::new();
    let mut agreeing = 0usize;
    for target in &keys {
        let (g, key) = target;
        let lookups = Lookups { h, known: &known, target };
        let mut found: Option<(Rational, Pivot)> = None;
        for cand in candidates(h, *g, key, &config.k_set, caps.weight_max) {
            let op = match ops.get(&(cand.k, cand.n)) {
                Some(op) => op,
                None => continue,
            };
            let lin = match coefficient(op, cand.eps_power, &cand.monomial, &lookups) {
                Some(l) if !l.c1.is_zero() => l,
                _ => continue,
            };
            let value = -lin.c0 / lin.c1;
            match &found {
                None => {
                    found = Some((value, cand));
                    if !config.cross_check {
                        break;
                    }
                }
                Some((v, first)) => {
                    if *v != value {
                        return Err(Error::Inconsistent {
                            g: *g,
                            insertions: render_insertions(&table.insertions(key)),
                            first: format!("{first} gives {}", fmt_rat(v)),
                            second: format!("{cand} gives {}", fmt_rat(&value)),
                        });
                    }
                    agreeing += 1;
                }
            }
        }
        let (value, pivot) = match found {
            Some(x) => x,
            None => {
                return Err(Error::NoPivot { g: *g, insertions: render_insertions(&table.insertions(key)) });
            }
        };
        if !value.is_zero() {
            debug!("{} = {} via {pivot}", describe(*g, key, &table), fmt_rat(&value));
        }
        known.insert(target.clone(), value.clone());
        table.insert(*g, key.clone(), value);
        pivots.insert(target.clone(), pivot);
    }
    Ok(Solution { table, pivots, agreeing_equations: agreeing })
}
