use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exact_series::{fmt_rat, int, Monomial, Rational, TruncatedSeries};

/// Heisenberg mode `J_m`, `m != 0`.
///
/// For `m < 0` it multiplies by `(-m) t_{-m} eps^{-1}`; for `m > 0` it is the
/// derivation `eps d/dt_m`. With this dressing `[J_m, J_{m'}] = m delta_{m,-m'}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(pub i64);

impl Mode {
    pub fn is_multiplication(self) -> bool {
        self.0 < 0
    }

    /// Applies the mode to one monomial, returning `coef * monomial`.
    pub fn act(self, m: &Monomial) -> Option<(Monomial, Rational)> {
        let idx = self.0.unsigned_abs() as u32;
        if self.0 < 0 {
            let out = m.mul(&Monomial::from_exponents([(idx, 1)], -1));
            Some((out, int(-self.0)))
        } else {
            let a = m.exponent(idx);
            if a == 0 {
                return None;
            }
            let out = m.shift_exponent(idx, -1).unwrap();
            Some((out.with_eps(out.eps_power() + 1), int(a as i64)))
        }
    }

    pub fn apply(self, s: &TruncatedSeries) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero_with_floor(s.weight_cap(), s.eps_floor());
        for (m, c) in s.iter() {
            if let Some((mm, f)) = self.act(m) {
                out.add_term(mm, c * f);
            }
        }
        out
    }
}

/// A normal-ordered product of modes times `eps^eps_shift`.
///
/// Modes are kept sorted ascending, which puts every multiplication mode to
/// the left of every derivation mode.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeWord {
    modes: Vec<i64>,
    eps_shift: i32,
}

impl ModeWord {
    pub fn new(mut modes: Vec<i64>, eps_shift: i32) -> Self {
        assert!(modes.iter().all(|&m| m != 0), "J_0 is not a mode");
        modes.sort_unstable();
        Self { modes, eps_shift }
    }

    pub fn scalar() -> Self {
        Self { modes: Vec::new(), eps_shift: 0 }
    }

    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    pub fn eps_shift(&self) -> i32 {
        self.eps_shift
    }

    pub fn is_scalar(&self) -> bool {
        self.modes.is_empty()
    }

    /// Change of t-weight produced by the word.
    pub fn weight_shift(&self) -> i64 {
        -self.modes.iter().sum::<i64>()
    }

    /// eps-degree carried by the word itself.
    pub fn eps_degree(&self) -> i32 {
        let d = self.modes.iter().filter(|&&m| m > 0).count() as i32;
        let u = self.modes.iter().filter(|&&m| m < 0).count() as i32;
        d - u + self.eps_shift
    }

    pub fn mult_modes(&self) -> impl Iterator<Item = i64> + '_ {
        self.modes.iter().copied().filter(|&m| m < 0)
    }

    pub fn deriv_modes(&self) -> impl Iterator<Item = i64> + '_ {
        self.modes.iter().copied().filter(|&m| m > 0)
    }

    /// Acts on a single monomial: derivations first, then multiplications.
    pub fn act(&self, m: &Monomial) -> Option<(Monomial, Rational)> {
        let mut cur = m.clone();
        let mut coef = Rational::one();
        for &k in self.modes.iter().rev() {
            let (next, f) = Mode(k).act(&cur)?;
            cur = next;
            coef *= f;
        }
        Some((cur.with_eps(cur.eps_power() + self.eps_shift), coef))
    }
}

impl fmt::Display for ModeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.modes.iter().map(|m| format!("J_{{{m}}}")).collect();
        if self.eps_shift != 0 {
            parts.push(format!("eps^{}", self.eps_shift));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Finite sum of normal-ordered mode words with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModePolynomial {
    terms: BTreeMap<ModeWord, Rational>,
}

impl ModePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(ModeWord::scalar(), c);
        p
    }

    pub fn add_term(&mut self, w: ModeWord, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModeWord, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the empty word, if that is the only term.
    pub fn as_scalar(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&ModeWord::scalar()).cloned(),
            _ => None,
        }
    }

    pub fn scalar_part(&self) -> Rational {
        self.terms.get(&ModeWord::scalar()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Drops every word containing a mode of index divisible by `h`.
    pub fn reduced(&self, h: u32) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            if w.modes.iter().all(|m| m % h as i64 != 0) {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Keeps words whose modes all satisfy `|m| <= cap`.
    pub fn mode_window(&self, cap: u32) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            if w.modes.iter().all(|m| m.unsigned_abs() <= cap as u64) {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Composes with the dilaton shift `t_{h+1} -> t_{h+1} - 1/(h+1)`, i.e.
    /// `J_{-(h+1)} -> J_{-(h+1)} - eps^{-1}`, re-expanded into normal-ordered words.
    pub fn with_dilaton(&self, h: u32) -> Self {
        let d = -((h + 1) as i64);
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let p = w.modes.iter().filter(|&&m| m == d).count() as u32;
            let others: Vec<i64> = w.modes.iter().copied().filter(|&m| m != d).collect();
            for j in 0..=p {
                let mut modes = others.clone();
                modes.extend(std::iter::repeat_n(d, (p - j) as usize));
                let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
                let coef = c * crate::exact_series::binomial(&int(p as i64), j) * sign;
                out.add_term(ModeWord::new(modes, w.eps_shift - j as i32), coef);
            }
        }
        out
    }

    pub fn indexed(&self) -> IndexedOperator {
        IndexedOperator::new(self)
    }

    /// Applies the operator to a series; the output keeps the input's cap.
    pub fn apply(&self, s: &TruncatedSeries) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero_with_floor(s.weight_cap(), s.eps_floor());
        for (m, c) in s.iter() {
            for (w, wc) in &self.terms {
                if let Some((mm, f)) = w.act(m) {
                    out.add_term(mm, c * wc * f);
                }
            }
        }
        out
    }
}

impl fmt::Display for ModePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let lines: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                if w.is_scalar() {
                    fmt_rat(c)
                } else {
                    format!("{} * {}", fmt_rat(c), w)
                }
            })
            .collect();
        write!(f, "{}", lines.join("\n"))
    }
}

/// Terms grouped by their derivation multiset `(index, count)`.
type DerivGroups = BTreeMap<Vec<(u32, u32)>, Vec<(Monomial, Rational)>>;

/// A [`ModePolynomial`] indexed by the derivation part of each word, so that
/// applying it to a monomial only visits words whose derivations can act.
#[derive(Clone, Debug)]
pub struct IndexedOperator {
    /// derivation exponents -> (multiplication monomial incl. eps, coefficient)
    by_deriv: DerivGroups,
    has_scalar_only: bool,
}

impl IndexedOperator {
    pub fn new(p: &ModePolynomial) -> Self {
        let mut by_deriv: DerivGroups = BTreeMap::new();
        for (w, c) in &p.terms {
            let d = Monomial::from_indices(&w.deriv_modes().map(|m| m as u32).collect::<Vec<_>>(), 0);
            let mult_idx: Vec<u32> = w.mult_modes().map(|m| (-m) as u32).collect();
            let mut coef = c.clone();
            for &n in &mult_idx {
                coef *= int(n as i64);
            }
            let n_deriv = d.degree() as i32;
            let eps = n_deriv - mult_idx.len() as i32 + w.eps_shift;
            let mono = Monomial::from_indices(&mult_idx, eps);
            by_deriv.entry(d.vars().to_vec()).or_default().push((mono, coef));
        }
        Self { by_deriv, has_scalar_only: p.terms.len() == 1 && p.terms.contains_key(&ModeWord::scalar()) }
    }

    pub fn is_scalar(&self) -> bool {
        self.has_scalar_only
    }

    pub fn apply(&self, s: &TruncatedSeries) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero_with_floor(s.weight_cap(), s.eps_floor());
        for (m, c) in s.iter() {
            let vars = m.vars();
            // enumerate sub-multisets of the monomial's variables
            let mut choice = vec![0u32; vars.len()];
            loop {
                let key: Vec<(u32, u32)> =
                    vars.iter().zip(&choice).filter(|(_, &k)| k > 0).map(|(&(n, _), &k)| (n, k)).collect();
                if let Some(words) = self.by_deriv.get(&key) {
                    let mut f = c.clone();
                    let mut rest = Vec::with_capacity(vars.len());
                    for (&(n, a), &k) in vars.iter().zip(&choice) {
                        f *= crate::exact_series::falling(a as i64, k);
                        if a > k {
                            rest.push((n, a - k));
                        }
                    }
                    let base = Monomial::from_exponents(rest, m.eps_power());
                    for (mono, coef) in words {
                        out.add_term(base.mul(mono), &f * coef);
                    }
                }
                let mut pos = 0;
                while pos < vars.len() && choice[pos] == vars[pos].1 {
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == vars.len() {
                    break;
                }
                choice[pos] += 1;
            }
        }
        out
    }
}

/// Every monomial in `t_n` (`n` not divisible by `skip_multiple`, if given)
/// of weight <= `cap`, eps-power 0.
pub fn basis_monomials(cap: u32, skip_multiple: Option<u32>) -> Vec<Monomial> {
    fn rec(
        min_part: u32,
        remaining: u32,
        skip: Option<u32>,
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        out.push(Monomial::from_indices(cur, 0));
        for p in min_part..=remaining {
            if skip.is_some_and(|h| p % h == 0) {
                continue;
            }
            cur.push(p);
            rec(p, remaining - p, skip, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, cap, skip_multiple, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rat;

    #[test]
    fn heisenberg_relations_on_basis() {
        let cap = 8;
        for m in basis_monomials(cap, None) {
            let s = TruncatedSeries::monomial(m.clone(), int(1), cap + 8);
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let ab = Mode(a).apply(&Mode(b).apply(&s));
                    let ba = Mode(b).apply(&Mode(a).apply(&s));
                    let expected = if a == -b { s.scale(&int(a)) } else { TruncatedSeries::zero(cap + 8) };
                    assert_eq!(ab.sub(&ba), expected, "[J_{a}, J_{b}] on {m}");
                }
            }
        }
    }

    #[test]
    fn normal_order_is_canonical() {
        let w = ModeWord::new(vec![3, -1, 2, -5], 0);
        assert_eq!(w.modes(), &[-5, -1, 2, 3]);
        assert_eq!(w.to_string(), "J_{-5} J_{-1} J_{2} J_{3}");
        assert_eq!(w.weight_shift(), 1);
        assert_eq!(w.eps_degree(), 0);
    }

    #[test]
    fn dilaton_expansion() {
        // h = 2: J_{-3} J_1 -> J_{-3} J_1 - eps^{-1} J_1
        let mut p = ModePolynomial::zero();
        p.add_term(ModeWord::new(vec![-3, 1], 0), int(1));
        let d = p.with_dilaton(2);
        let mut expected = ModePolynomial::zero();
        expected.add_term(ModeWord::new(vec![-3, 1], 0), int(1));
        expected.add_term(ModeWord::new(vec![1], -1), int(-1));
        assert_eq!(d, expected);
        // acting on t_1: J_1 t_1 = eps, so -eps^{-1} J_1 t_1 = -1
        let s = TruncatedSeries::var(1, 6);
        let out = d.apply(&s);
        let mut want = TruncatedSeries::zero(6);
        want.add_term(Monomial::from_indices(&[3], 0), int(3));
        want.add_term(Monomial::one(), int(-1));
        assert_eq!(out, want);
    }

    #[test]
    fn dilaton_matches_substitution() {
        // J_{-3}^2 applied after the shift equals (3 t_3 - 1)^2 eps^{-2}.
        let mut p = ModePolynomial::zero();
        p.add_term(ModeWord::new(vec![-3, -3], 0), rat(1, 2));
        let s = TruncatedSeries::one(9);
        let got = p.with_dilaton(2).apply(&s);
        let lin = TruncatedSeries::var(3, 9).scale(&int(3)).sub(&TruncatedSeries::one(9));
        let want = lin.mul(&lin).mul_monomial(&Monomial::eps(-2), &rat(1, 2));
        assert_eq!(got, want);
    }

    #[test]
    fn indexed_matches_direct() {
        let mut p = ModePolynomial::zero();
        p.add_term(ModeWord::new(vec![-3, 1, 1], 0), rat(2, 3));
        p.add_term(ModeWord::new(vec![-1, 2], -1), int(5));
        p.add_term(ModeWord::new(vec![-2, -2], 0), int(-1));
        p.add_term(ModeWord::scalar(), rat(1, 7));
        p.add_term(ModeWord::new(vec![1, 2, 3], 2), int(4));
        let ix = p.indexed();
        for m in basis_monomials(7, None) {
            let s = TruncatedSeries::monomial(m.with_eps(3), rat(3, 2), 9);
            assert_eq!(ix.apply(&s), p.apply(&s), "on {m}");
        }
    }

    #[test]
    fn basis_counts_are_partition_numbers() {
        // p(0..=6) = 1,1,2,3,5,7,11
        assert_eq!(basis_monomials(6, None).len(), 30);
        // odd parts only up to 6: 1,1,1,2,2,3,4
        assert_eq!(basis_monomials(6, Some(2)).len(), 14);
    }
}
