//! Single coefficients of `exp(-F) J exp(F)`.
//!
//! For a normal-ordered word with multiplication part `M` and derivations
//! `d_1 ... d_r`, `exp(-F) M d_1...d_r exp(F) = M sum_pi prod_{B in pi} d_B F`
//! over set partitions `pi` of the derivations. With
//! `F = sum_g eps^{2g-2} F_g`, the coefficient of `eps^p t^R` only involves
//! correlators of bounded genus, which is what makes a genus cap usable.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::boson_fock::ModePolynomial;
use crate::exact_series::{falling, int, Monomial, Rational};

/// One word of a dilaton-shifted, reduced `J_n^k`, in the form used by the
/// cumulant expansion.
#[derive(Clone, Debug)]
pub struct Term {
    /// Coefficient including the `-m` factors of the multiplication modes.
    pub coef: Rational,
    /// Multiplied `t`-indices, eps-power 0.
    pub mult: Monomial,
    /// Derivation indices in ascending order, with repetition.
    pub derivs: Vec<u32>,
    /// eps-power carried by the word itself.
    pub eps: i32,
}

/// `J_n^k` prepared for coefficient evaluation.
#[derive(Clone, Debug)]
pub struct ConstraintOperator {
    pub k: u32,
    pub n: i64,
    pub terms: Vec<Term>,
}

impl ConstraintOperator {
    /// `op` must already be reduced and dilaton-shifted.
    pub fn new(k: u32, n: i64, op: &ModePolynomial) -> Self {
        let mut terms = Vec::with_capacity(op.len());
        for (w, c) in op.terms() {
            let mut coef = c.clone();
            let mut mult = Vec::new();
            for m in w.mult_modes() {
                coef *= int(-m);
                mult.push((-m) as u32);
            }
            let derivs: Vec<u32> = w.deriv_modes().map(|m| m as u32).collect();
            let eps = derivs.len() as i32 - mult.len() as i32 + w.eps_shift();
            terms.push(Term { coef, mult: Monomial::from_indices(&mult, 0), derivs, eps });
        }
        Self { k, n, terms }
    }

    /// Largest number of modes in a word, the bound on genus spread.
    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.derivs.len() as u32 + t.mult.degree()).max().unwrap_or(0)
    }
}

/// Status of one correlator during elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Known(Rational),
    /// The target, entering `F` as `scale * x`.
    Target(Rational),
    Unknown,
}

/// `c0 + c1 * x` in the target correlator `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub c0: Rational,
    pub c1: Rational,
}

/// Value of `<T>_g` as it enters `d_B F`: the coefficient of
/// `eps^{2g-2} t^T` in `F`, before differentiation.
pub trait CorrelatorSource {
    fn f_value(&self, g: u32, key: &Monomial) -> Lookup;
}

/// Set partitions of `0..r`, each as a list of blocks.
pub fn set_partitions(r: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, r: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == r {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, r, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, r, cur, out);
        cur.pop();
    }
    rec(0, r, &mut cur, &mut out);
    out
}

/// All ordered splits of the exponent vector `vars` into `parts` pieces.
fn splits(vars: &[(u32, u32)], parts: usize) -> Vec<Vec<Vec<(u32, u32)>>> {
    let mut out = vec![vec![Vec::new(); parts]];
    for &(n, a) in vars {
        let mut next = Vec::new();
        for s in &out {
            for comp in compositions(a, parts) {
                let mut t = s.clone();
                for (p, &c) in comp.iter().enumerate() {
                    if c > 0 {
                        t[p].push((n, c));
                    }
                }
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Weak compositions of `total` into `parts` nonnegative parts.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Running product `coef * x^power`.
struct Factor {
    coef: Rational,
    power: u32,
}

/// Coefficient of `eps^p t^R` in `exp(-F) J exp(F)`, as a linear function of
/// the target correlator. `None` if it involves an unknown correlator or is
/// nonlinear in the target.
pub fn coefficient(
    op: &ConstraintOperator,
    p: i32,
    r: &Monomial,
    source: &dyn CorrelatorSource,
) -> Option<Linear> {
    let mut acc = Linear { c0: Rational::zero(), c1: Rational::zero() };
    let mut partitions: BTreeMap<usize, Vec<Vec<Vec<usize>>>> = BTreeMap::new();
    for term in &op.terms {
        let rest = match r.divide(&term.mult) {
            Some(x) => x,
            None => continue,
        };
        if term.derivs.is_empty() {
            if rest.is_t_constant() && p == term.eps {
                acc.c0 += &term.coef;
            }
            continue;
        }
        let parts = partitions.entry(term.derivs.len()).or_insert_with(|| set_partitions(term.derivs.len()));
        for pi in parts.iter() {
            // sum over blocks of (2 g_B - 2) is p - eps
            let twice = p - term.eps + 2 * pi.len() as i32;
            if twice < 0 || twice % 2 != 0 {
                continue;
            }
            let genus_total = (twice / 2) as u32;
            let blocks: Vec<Monomial> = pi
                .iter()
                .map(|b| Monomial::from_indices(&b.iter().map(|&i| term.derivs[i]).collect::<Vec<_>>(), 0))
                .collect();
            for split in splits(rest.vars(), blocks.len()) {
                for genera in compositions(genus_total, blocks.len()) {
                    let mut f = Factor { coef: term.coef.clone(), power: 0 };
                    let mut unknown = false;
                    for ((b, s), &g) in blocks.iter().zip(&split).zip(&genera) {
                        let key = Monomial::from_exponents(s.iter().copied(), 0).mul(b);
                        match source.f_value(g, &key) {
                            Lookup::Known(v) if v.is_zero() => {
                                f.coef = Rational::zero();
                                break;
                            }
                            Lookup::Known(v) => f.coef *= v,
                            Lookup::Target(scale) => {
                                f.coef *= scale;
                                f.power += 1;
                            }
                            Lookup::Unknown => unknown = true,
                        }
                        for &(n, e) in b.vars() {
                            f.coef *= falling(key.exponent(n) as i64, e);
                        }
                    }
                    if f.coef.is_zero() {
                        continue;
                    }
                    if unknown {
                        return None;
                    }
                    match f.power {
                        0 => acc.c0 += f.coef,
                        1 => acc.c1 += f.coef,
                        _ => return None,
                    }
                }
            }
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|r| set_partitions(r).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn split_counts() {
        // t_1^2 t_3 into two ordered pieces: 3 * 2
        assert_eq!(splits(&[(1, 2), (3, 1)], 2).len(), 6);
        assert_eq!(compositions(3, 3).len(), 10);
    }
}
