//! Extraction of the operators `J_n^k` from the branch-summed expansion of
//! `c(s/lambda) Gamma(w, zeta)`, and the closed form of the reduced `J^1_n`.
//!
//! Only modes with positive-index sum and negative-index sum both at most
//! `weight_cap` are kept: higher modes act by zero on series truncated at
//! that weight.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::modes::{ModePolynomial, ModeWord};
use super::vertex::{build_gamma_kp, VertexOperatorData};
use super::zeta::ZetaSeries;
use crate::error::{Error, Result};
use crate::exact_series::{binomial, factorial, int, pow_i, poly_mul, rat, Rational};
use crate::period_picture::phase::PhaseFactor;

/// Window of extracted operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractWindow {
    pub k_max: u32,
    /// `|n| <= n_window`.
    pub n_window: i64,
    pub weight_cap: u32,
}

pub type OperatorTable = BTreeMap<(u32, i64), ModePolynomial>;

/// All ascending multisets of nonzero modes with the given sum and at most
/// `max_size` elements, positive part and negative part each bounded by `cap`
/// in absolute sum. Modes divisible by `skip` are excluded.
pub fn mode_multisets(total: i64, max_size: usize, cap: u32, skip: Option<u32>) -> Vec<Vec<i64>> {
    let cap = cap as i64;
    let mut out = Vec::new();
    fn positives(
        min: i64,
        remaining: i64,
        slots: usize,
        skip: Option<u32>,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for m in min..=remaining {
            if skip.is_some_and(|h| m % h as i64 == 0) {
                continue;
            }
            cur.push(m);
            positives(m, remaining - m, slots - 1, skip, cur, out);
            cur.pop();
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn negatives(
        max_abs: i64,
        neg_sum: i64,
        cap: i64,
        total: i64,
        slots: usize,
        skip: Option<u32>,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        // close the negative part here: the positive part must sum to total + neg_sum
        let pos = total + neg_sum;
        if pos >= 0 && pos <= cap {
            positives(1, pos, slots, skip, &mut cur.clone(), out);
        }
        if slots == 0 {
            return;
        }
        for a in (1..=max_abs.min(cap - neg_sum)).rev() {
            if skip.is_some_and(|h| a % h as i64 == 0) {
                continue;
            }
            cur.push(-a);
            negatives(a, neg_sum + a, cap, total, slots - 1, skip, cur, out);
            cur.pop();
        }
    }
    negatives(cap, 0, cap, total, max_size, skip, &mut Vec::new(), &mut out);
    for w in out.iter_mut() {
        w.sort_unstable();
    }
    out.sort();
    out.dedup();
    out
}

fn multiplicities(modes: &[i64]) -> Vec<(i64, u32)> {
    let mut out: Vec<(i64, u32)> = Vec::new();
    for &m in modes {
        match out.last_mut() {
            Some((x, c)) if *x == m => *c += 1,
            _ => out.push((m, 1)),
        }
    }
    out
}

/// Dense coefficients of `((1+u)^{-m/h} - 1)/m` up to `u^order`.
fn f_mode(m: i64, h: u32, order: usize) -> Vec<Rational> {
    let alpha = rat(-m, h as i64);
    let mut v: Vec<Rational> = (0..=order as u32).map(|j| binomial(&alpha, j)).collect();
    v[0] = Rational::zero();
    let inv = rat(1, m);
    v.iter().map(|x| x * &inv).collect()
}

/// `J_n^k` by the closed coefficient formula
/// `J_n^k = k! h^{-n} sum_mu [u^{k+1}](c(u) prod_m f_m(u)^{mu_m}/mu_m!) J^mu`.
pub fn extract_j_single(h: u32, k: u32, n: i64, weight_cap: u32, phase: &PhaseFactor) -> ModePolynomial {
    let order = (k + 1) as usize;
    let c: Vec<Rational> = phase.coeffs.iter().take(order + 1).cloned().collect();
    let h_rat = int(h as i64);
    let pref = factorial(k) * pow_i(&h_rat, -n);
    let mut out = ModePolynomial::zero();
    let mut cache: BTreeMap<i64, Vec<Rational>> = BTreeMap::new();
    for mu in mode_multisets(n * h as i64, order, weight_cap, None) {
        let mut prod = c.clone();
        for (m, a) in multiplicities(&mu) {
            let f = cache.entry(m).or_insert_with(|| f_mode(m, h, order)).clone();
            for _ in 0..a {
                prod = poly_mul(&prod, &f, order);
            }
            prod = prod.into_iter().map(|x| x / factorial(a)).collect();
        }
        let coef = prod.get(order).cloned().unwrap_or_else(Rational::zero);
        if !coef.is_zero() {
            out.add_term(ModeWord::new(mu, 0), coef * &pref);
        }
    }
    out
}

/// The window of unreduced operators `J_n^k`, `0 <= k <= k_max`, `|n| <= n_window`.
pub fn extract_j(h: u32, window: ExtractWindow) -> Result<OperatorTable> {
    let phase = PhaseFactor::new(h, window.k_max + 1)?;
    let keys: Vec<(u32, i64)> = (0..=window.k_max)
        .flat_map(|k| (-window.n_window..=window.n_window).map(move |n| (k, n)))
        .collect();
    let ops: Vec<((u32, i64), ModePolynomial)> = keys
        .par_iter()
        .map(|&(k, n)| ((k, n), extract_j_single(h, k, n, window.weight_cap, &phase)))
        .collect();
    Ok(ops.into_iter().collect())
}

/// Coefficient of `zeta^a s^j` in `prefactor * :exp(sum_m g_m J_m):`, with
/// `g_m` the mode coefficients of `v`.
pub fn vertex_coefficient(v: &VertexOperatorData, prefactor: &ZetaSeries, a: i64, j: u32) -> ModePolynomial {
    let h = v.h as i64;
    let mut out = ModePolynomial::zero();
    let mut cache: BTreeMap<i64, ZetaSeries> = BTreeMap::new();
    // Every mode coefficient g_m only has terms zeta^{-m - h r} s^r. A prefactor
    // term zeta^{z} s^{p} therefore pairs with mode words of sum -(a - z) - h (j - p).
    let skip = if v.mult.keys().chain(v.deriv.keys()).any(|n| n % v.h == 0) { None } else { Some(v.h) };
    let mut words: Vec<Vec<i64>> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (&(z, p), _) in prefactor.iter() {
        if p > j || !seen.insert((z, p)) {
            continue;
        }
        let total = -(a - z) - h * (j - p) as i64;
        words.extend(mode_multisets(total, (j - p) as usize, v.mode_cap, skip));
    }
    words.sort();
    words.dedup();
    for mu in words {
        let mut prod = prefactor.truncated(j);
        for (m, mult) in multiplicities(&mu) {
            let g = cache.entry(m).or_insert_with(|| v.mode_coefficient(m).truncated(j)).clone();
            prod = prod.mul(&g.pow(mult)).scale(&factorial(mult).recip());
            if prod.is_zero() {
                break;
            }
        }
        let c = prod.coefficient(a, j);
        if !c.is_zero() {
            out.add_term(ModeWord::new(mu, 0), c);
        }
    }
    out
}

/// Branch-summed coefficient of `lambda^e s^j`: `h * h^e * [zeta^{eh} s^j]`.
pub fn lambda_coefficient(v: &VertexOperatorData, prefactor: &ZetaSeries, e: i64, j: u32) -> ModePolynomial {
    let h_rat = int(v.h as i64);
    vertex_coefficient(v, prefactor, e * v.h as i64, j).scale(&(&h_rat * pow_i(&h_rat, e)))
}

/// `J_n^k` read off the generic vertex expansion; an independent route to
/// [`extract_j_single`].
pub fn extract_j_generic(h: u32, window: ExtractWindow) -> Result<OperatorTable> {
    let s_order = window.k_max + 1;
    let v = build_gamma_kp(h, s_order, window.weight_cap, false);
    let phase = PhaseFactor::new(h, s_order)?;
    let pref = phase.c_of_s_over_lambda();
    let pole = lambda_coefficient(&v, &pref, 0, 0);
    let h_sq = int((h * h) as i64);
    if pole.as_scalar() != Some(h_sq.clone()) {
        return Err(Error::PoleNotCancelled { residue: pole.to_string() });
    }
    let mut out = OperatorTable::new();
    for k in 0..=window.k_max {
        for n in -window.n_window..=window.n_window {
            let e = -n - k as i64 - 1;
            let c = lambda_coefficient(&v, &pref, e, k + 1);
            out.insert((k, n), c.scale(&(factorial(k) / int(h as i64))));
        }
    }
    Ok(out)
}

/// The closed form of the reduced `J^1_n`:
/// `(h^{-n-1}/2) sum_{m not in hZ} :J_m J_{nh-m}: + delta_{n,0} (h^2-1)/(24h)`,
/// restricted to the same mode window as the extraction.
pub fn virasoro_closed_form(h: u32, n: i64, weight_cap: u32) -> ModePolynomial {
    let h_i = h as i64;
    let cap = weight_cap as i64;
    let half = pow_i(&int(h_i), -n - 1) * rat(1, 2);
    let mut out = ModePolynomial::zero();
    for m in -2 * cap - h_i * n.abs()..=2 * cap + h_i * n.abs() {
        let m2 = n * h_i - m;
        if m == 0 || m2 == 0 || m % h_i == 0 {
            continue;
        }
        let pos: i64 = [m, m2].iter().filter(|&&x| x > 0).sum();
        let neg: i64 = -[m, m2].iter().filter(|&&x| x < 0).sum::<i64>();
        if pos > cap || neg > cap {
            continue;
        }
        out.add_term(ModeWord::new(vec![m, m2], 0), half.clone());
    }
    if n == 0 {
        out.add_term(ModeWord::scalar(), rat((h * h - 1) as i64, 24 * h_i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson_fock::modes::basis_monomials;
    use crate::exact_series::TruncatedSeries;

    #[test]
    fn multiset_enumeration_small() {
        let v = mode_multisets(0, 2, 2, None);
        assert!(v.contains(&vec![]));
        assert!(v.contains(&vec![-1, 1]));
        assert!(v.contains(&vec![-2, 2]));
        assert_eq!(v.len(), 3);
        let w = mode_multisets(2, 2, 3, Some(2));
        // {-1,3}, {1,1}
        assert_eq!(w, vec![vec![-1, 3], vec![1, 1]]);
    }

    #[test]
    fn multiset_sums_and_bounds() {
        for total in -5..=5i64 {
            for mu in mode_multisets(total, 3, 6, Some(3)) {
                assert_eq!(mu.iter().sum::<i64>(), total);
                assert!(mu.len() <= 3);
                assert!(mu.iter().all(|m| m % 3 != 0));
                assert!(mu.iter().filter(|&&m| m > 0).sum::<i64>() <= 6);
                assert!(-mu.iter().filter(|&&m| m < 0).sum::<i64>() <= 6);
                assert!(mu.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn fast_and_generic_agree() {
        for h in 2..=3u32 {
            let w = ExtractWindow { k_max: 2, n_window: 2, weight_cap: 6 };
            let a = extract_j(h, w).unwrap();
            let b = extract_j_generic(h, w).unwrap();
            assert_eq!(a, b, "h = {h}");
        }
    }

    #[test]
    fn j0_reduces_to_zero() {
        let w = ExtractWindow { k_max: 0, n_window: 3, weight_cap: 8 };
        for h in 2..=4u32 {
            let t = extract_j(h, w).unwrap();
            for n in -3..=3 {
                assert!(t[&(0, n)].reduced(h).is_zero());
            }
        }
    }

    #[test]
    fn reduced_j1_matches_closed_form() {
        for h in 2..=3u32 {
            let cap = 8;
            let w = ExtractWindow { k_max: 1, n_window: 2, weight_cap: cap };
            let t = extract_j(h, w).unwrap();
            for n in -2..=2 {
                let red = t[&(1, n)].reduced(h);
                assert_eq!(red, virasoro_closed_form(h, n, cap), "h={h} n={n}");
            }
        }
        let t = extract_j(2, ExtractWindow { k_max: 1, n_window: 0, weight_cap: 4 }).unwrap();
        assert_eq!(t[&(1, 0)].scalar_part(), rat(1, 16));
    }

    #[test]
    fn homogeneity() {
        let h = 3;
        let w = ExtractWindow { k_max: 2, n_window: 2, weight_cap: 7 };
        for ((_, n), op) in extract_j(h, w).unwrap() {
            for (word, _) in op.terms() {
                assert_eq!(word.weight_shift(), -n * h as i64);
            }
            for m in basis_monomials(5, None) {
                let s = TruncatedSeries::monomial(m.clone(), int(1), 7);
                for (out, _) in op.apply(&s).iter() {
                    assert_eq!(out.weight() as i64, m.weight() as i64 - n * h as i64);
                }
            }
        }
    }
}
