use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_rat, int, Monomial, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate series in `t_1, t_2, ...` and `eps`, truncated by
/// total t-weight.
///
/// Invariants: no stored zero coefficient; every stored monomial has
/// weight <= `weight_cap` and eps-power >= `eps_floor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    terms: BTreeMap<Monomial, Rational>,
    weight_cap: u32,
    eps_floor: i32,
}

/// Default eps floor: effectively unbounded for the sizes handled here.
pub const NO_EPS_FLOOR: i32 = i32::MIN / 4;

impl TruncatedSeries {
    pub fn zero(weight_cap: u32) -> Self {
        Self::zero_with_floor(weight_cap, NO_EPS_FLOOR)
    }

    pub fn zero_with_floor(weight_cap: u32, eps_floor: i32) -> Self {
        Self { terms: BTreeMap::new(), weight_cap, eps_floor }
    }

    pub fn one(weight_cap: u32) -> Self {
        Self::constant(Rational::one(), weight_cap)
    }

    pub fn constant(c: Rational, weight_cap: u32) -> Self {
        Self::monomial(Monomial::one(), c, weight_cap)
    }

    pub fn monomial(m: Monomial, c: Rational, weight_cap: u32) -> Self {
        let mut s = Self::zero(weight_cap);
        s.add_term(m, c);
        s
    }

    /// The series `t_n`.
    pub fn var(n: u32, weight_cap: u32) -> Self {
        Self::monomial(Monomial::var(n), Rational::one(), weight_cap)
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
        weight_cap: u32,
        eps_floor: i32,
    ) -> Self {
        let mut s = Self::zero_with_floor(weight_cap, eps_floor);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn eps_floor(&self) -> i32 {
        self.eps_floor
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn admits(&self, m: &Monomial) -> bool {
        m.weight() <= self.weight_cap && m.eps_power() >= self.eps_floor
    }

    /// Adds `c * m`, dropping it if outside the truncation window.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn with_cap(&self, weight_cap: u32) -> Self {
        Self::from_terms(self.terms.clone(), weight_cap, self.eps_floor)
    }

    pub fn with_eps_floor(&self, eps_floor: i32) -> Self {
        Self::from_terms(self.terms.clone(), self.weight_cap, eps_floor)
    }

    /// Terms of total weight <= `w` (the cap is kept).
    pub fn truncated(&self, w: u32) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(m, _)| m.weight() <= w).map(|(m, c)| (m.clone(), c.clone())),
            self.weight_cap,
            self.eps_floor,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero_with_floor(
            self.weight_cap.min(other.weight_cap),
            self.eps_floor.max(other.eps_floor),
        );
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(m, v)| (m.clone(), v * c)),
            self.weight_cap,
            self.eps_floor,
        )
    }

    /// Multiplies by the monomial `c * m`.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(k, v)| (k.mul(m), v * c)),
            self.weight_cap,
            self.eps_floor,
        )
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.weight_cap.min(other.weight_cap);
        let mut out = Self::zero_with_floor(cap, self.eps_floor.max(other.eps_floor));
        // Bucket the right factor by weight so the inner loop stops early.
        let mut by_weight: Vec<(u32, &Monomial, &Rational)> =
            other.terms.iter().map(|(m, c)| (m.weight(), m, c)).collect();
        by_weight.sort_by_key(|&(w, _, _)| w);
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > cap {
                continue;
            }
            for &(wb, mb, cb) in &by_weight {
                if wa + wb > cap {
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.weight_cap).with_eps_floor(self.eps_floor);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp(self)`; the series must have no weight-0 part.
    pub fn exp(&self) -> Result<Self> {
        if self.terms.keys().any(|m| m.is_t_constant()) {
            return Err(Error::ExpConstantTerm);
        }
        let mut acc = Self::one(self.weight_cap).with_eps_floor(self.eps_floor);
        let mut power = acc.clone();
        let mut j = 1u32;
        loop {
            power = power.mul(self).scale(&int(j as i64).recip());
            if power.is_zero() {
                break;
            }
            acc.add_assign(&power);
            j += 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse; the weight-0 part must be a nonzero scalar
    /// (no eps dependence).
    pub fn invert(&self) -> Result<Self> {
        let mut c0 = Rational::zero();
        for (m, c) in &self.terms {
            if m.is_t_constant() {
                if m.eps_power() != 0 {
                    return Err(Error::NotInvertible);
                }
                c0 = c.clone();
            }
        }
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        // self = c0 (1 - x), inverse = c0^{-1} sum x^j; x has positive weight.
        let inv0 = c0.recip();
        let x = self.scale(&-inv0.clone()).add(&Self::one(self.weight_cap));
        let mut acc = Self::one(self.weight_cap).with_eps_floor(self.eps_floor);
        let mut power = acc.clone();
        loop {
            power = power.mul(&x);
            if power.is_zero() {
                break;
            }
            acc.add_assign(&power);
        }
        Ok(acc.scale(&inv0))
    }

    /// Partial derivative with respect to `t_n`.
    pub fn derivative(&self, n: u32) -> Self {
        Self::from_terms(
            self.terms.iter().filter_map(|(m, c)| {
                let a = m.exponent(n);
                (a > 0).then(|| (m.shift_exponent(n, -1).unwrap(), c * int(a as i64)))
            }),
            self.weight_cap,
            self.eps_floor,
        )
    }

    /// Substitutes `t_var -> replacement`.
    ///
    /// Every term of the replacement must have weight >= `var`, except that
    /// an affine shift `t_var + const` is accepted; in that case the
    /// re-expansion is exact only for terms retained in `self`.
    pub fn substitute(&self, var: u32, replacement: &Self) -> Result<Self> {
        let affine = {
            let lin = replacement.coefficient(&Monomial::var(var));
            lin.is_one()
                && replacement
                    .terms
                    .keys()
                    .all(|m| *m == Monomial::var(var) || *m == Monomial::one())
        };
        if !affine {
            if let Some(m) = replacement.terms.keys().find(|m| m.weight() < var) {
                return Err(Error::NegativeWeightSubstitution { var, weight: m.weight() });
            }
        }
        let cap = self.weight_cap;
        let mut powers: Vec<Self> = vec![Self::one(cap).with_eps_floor(self.eps_floor)];
        let mut out = Self::zero_with_floor(cap, self.eps_floor);
        for (m, c) in &self.terms {
            let a = m.exponent(var) as usize;
            while powers.len() <= a {
                let next = powers.last().unwrap().mul(&replacement.with_cap(cap));
                powers.push(next);
            }
            let rest = m.shift_exponent(var, -(a as i64)).unwrap();
            out.add_assign(&powers[a].mul_monomial(&rest, c));
        }
        Ok(out)
    }

    /// Keeps only the terms whose eps-power equals `e`.
    pub fn eps_slice(&self, e: i32) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(m, _)| m.eps_power() == e).map(|(m, c)| (m.clone(), c.clone())),
            self.weight_cap,
            self.eps_floor,
        )
    }

    /// Coefficients of a single-variable series in `t_var` as a dense vector
    /// of length `cap / var + 1` (eps-free terms only).
    pub fn univariate_coeffs(&self, var: u32) -> Vec<Rational> {
        let len = (self.weight_cap / var + 1) as usize;
        let mut out = vec![Rational::zero(); len];
        for (m, c) in &self.terms {
            if m.eps_power() == 0 && m.vars().iter().all(|&(n, _)| n == var) {
                let k = m.exponent(var) as usize;
                if k < len {
                    out[k] = c.clone();
                }
            }
        }
        out
    }

    /// Dense univariate series `sum c_k t_var^k`.
    pub fn from_univariate(var: u32, coeffs: &[Rational], weight_cap: u32) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::from_exponents([(var, k as u32)], 0), c.clone())),
            weight_cap,
            NO_EPS_FLOOR,
        )
    }

    /// `(1 + t_var)^alpha` by the binomial series.
    pub fn binomial_series(alpha: &Rational, var: u32, weight_cap: u32) -> Self {
        let n = weight_cap / var;
        let coeffs: Vec<Rational> = (0..=n).map(|j| super::binomial(alpha, j)).collect();
        Self::from_univariate(var, &coeffs, weight_cap)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == Monomial::one() {
                    fmt_rat(c)
                } else {
                    format!("{} * {}", fmt_rat(c), m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rat;

    fn t(n: u32, cap: u32) -> TruncatedSeries {
        TruncatedSeries::var(n, cap)
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let x = t(1, 5).add(&t(3, 5).scale(&rat(2, 3)));
        assert_eq!(x.add(&TruncatedSeries::zero(5)), x);
        let one = TruncatedSeries::one(5);
        let sum = one.add(&t(1, 5)).add(&one.sub(&t(1, 5)));
        assert_eq!(sum, TruncatedSeries::constant(int(2), 5));
    }

    #[test]
    fn difference_of_squares() {
        let one = TruncatedSeries::one(6);
        let s = t(1, 6);
        let prod = one.add(&s).mul(&one.sub(&s));
        assert_eq!(prod, one.sub(&s.mul(&s)));
    }

    #[test]
    fn exp_definition() {
        let e = t(1, 3).exp().unwrap();
        let expected = TruncatedSeries::from_univariate(1, &[int(1), int(1), rat(1, 2), rat(1, 6)], 3);
        assert_eq!(e, expected);
        assert_eq!(TruncatedSeries::zero(4).exp().unwrap(), TruncatedSeries::one(4));
    }

    #[test]
    fn exp_rejects_constant() {
        let a = TruncatedSeries::one(3).add(&t(1, 3));
        assert!(matches!(a.exp(), Err(Error::ExpConstantTerm)));
        // eps-only constant is also weight zero
        let b = TruncatedSeries::monomial(Monomial::eps(-1), int(1), 3);
        assert!(b.exp().is_err());
    }

    #[test]
    fn invert_rejects_zero_constant() {
        assert!(matches!(t(1, 4).invert(), Err(Error::NotInvertible)));
    }

    #[test]
    fn invert_geometric() {
        let a = TruncatedSeries::one(5).sub(&t(1, 5));
        let inv = a.invert().unwrap();
        assert_eq!(inv, TruncatedSeries::from_univariate(1, &vec![int(1); 6], 5));
    }

    #[test]
    fn truncation_drops_heavy_terms() {
        let s = t(2, 3).mul(&t(2, 3));
        assert!(s.is_zero());
    }

    #[test]
    fn derivative_power_rule() {
        let s = t(1, 6).pow(3).scale(&int(2));
        assert_eq!(s.derivative(1), t(1, 6).pow(2).scale(&int(6)));
    }

    #[test]
    fn dilaton_style_affine_shift() {
        // t_3^2 with t_3 -> t_3 - 1/3
        let s = t(3, 6).pow(2);
        let repl = t(3, 6).sub(&TruncatedSeries::constant(rat(1, 3), 6));
        let out = s.substitute(3, &repl).unwrap();
        let expected = t(3, 6)
            .pow(2)
            .sub(&t(3, 6).scale(&rat(2, 3)))
            .add(&TruncatedSeries::constant(rat(1, 9), 6));
        assert_eq!(out, expected);
    }

    #[test]
    fn substitution_rejects_weight_lowering() {
        let s = t(3, 6);
        let bad = t(1, 6);
        assert!(matches!(
            s.substitute(3, &bad),
            Err(Error::NegativeWeightSubstitution { var: 3, weight: 1 })
        ));
        // weight-raising is fine
        let good = t(1, 6).mul(&t(2, 6)).scale(&int(2));
        let out = s.mul(&t(1, 6)).substitute(3, &good).unwrap();
        assert_eq!(out, t(1, 6).pow(2).mul(&t(2, 6)).scale(&int(2)));
    }

    #[test]
    fn rendering_is_canonical() {
        let s = TruncatedSeries::from_terms(
            [
                (Monomial::from_exponents([(3, 1), (1, 2)], -2), rat(1, 6)),
                (Monomial::one(), int(1)),
            ],
            10,
            NO_EPS_FLOOR,
        );
        assert_eq!(s.to_string(), "1 + 1/6 * t_1^2 t_3 eps^-2");
    }

    #[test]
    fn eps_floor_is_enforced() {
        let mut s = TruncatedSeries::zero_with_floor(4, -1);
        s.add_term(Monomial::eps(-2), int(1));
        assert!(s.is_zero());
    }
}
