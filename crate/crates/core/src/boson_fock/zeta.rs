//! Finite expansions in `zeta = (h lambda)^{1/h}` and the Taylor variable `s`.
//!
//! Exponents of `zeta` are plain integers, so a term `zeta^a` with `h` not
//! dividing `a` is a fractional power of `lambda`. The sum over the `h`
//! branches of the root is the projector [`branch_sum`]: it keeps the
//! exponents divisible by `h` and multiplies them by `h`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_series::{int, pow_i, Rational, TruncatedSeries};

/// Sparse map `(zeta exponent, s power) -> Rational`, truncated in `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaSeries {
    terms: BTreeMap<(i64, u32), Rational>,
    s_order: u32,
}

impl ZetaSeries {
    pub fn zero(s_order: u32) -> Self {
        Self { terms: BTreeMap::new(), s_order }
    }

    pub fn term(zeta: i64, s: u32, c: Rational, s_order: u32) -> Self {
        let mut z = Self::zero(s_order);
        z.add_term(zeta, s, c);
        z
    }

    pub fn one(s_order: u32) -> Self {
        Self::term(0, 0, int(1), s_order)
    }

    pub fn s_order(&self) -> u32 {
        self.s_order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, zeta: i64, s: u32) -> Rational {
        self.terms.get(&(zeta, s)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, zeta: i64, s: u32, c: Rational) {
        if s > self.s_order || c.is_zero() {
            return;
        }
        let key = (zeta, s);
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Lowest `s` power present, if any.
    pub fn s_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, s)| s).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self { terms: self.terms.clone(), s_order: self.s_order.min(other.s_order) };
        out.terms.retain(|&(_, s), _| s <= out.s_order);
        for (&(z, s), c) in &other.terms {
            out.add_term(z, s, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.s_order);
        for (&(z, s), v) in &self.terms {
            out.add_term(z, s, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.s_order.min(other.s_order);
        let mut out = Self::zero(cap);
        for (&(za, sa), a) in &self.terms {
            for (&(zb, sb), b) in &other.terms {
                if sa + sb <= cap {
                    out.add_term(za + zb, sa + sb, a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.s_order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Keeps only `s` powers up to `order`.
    pub fn truncated(&self, order: u32) -> Self {
        let mut out = Self::zero(order.min(self.s_order));
        for (&(z, s), c) in &self.terms {
            out.add_term(z, s, c.clone());
        }
        out
    }
}

/// A field with [`TruncatedSeries`] coefficients: `(zeta exponent, s power) -> series`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldSeries {
    terms: BTreeMap<(i64, u32), TruncatedSeries>,
}

impl FieldSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, u32), &TruncatedSeries)> {
        self.terms.iter()
    }

    pub fn get(&self, zeta: i64, s: u32) -> Option<&TruncatedSeries> {
        self.terms.get(&(zeta, s))
    }

    pub fn add_series(&mut self, zeta: i64, s: u32, v: &TruncatedSeries) {
        if v.is_zero() {
            return;
        }
        match self.terms.get_mut(&(zeta, s)) {
            Some(e) => {
                *e = e.add(v);
                if e.is_zero() {
                    self.terms.remove(&(zeta, s));
                }
            }
            None => {
                self.terms.insert((zeta, s), v.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by a scalar field, truncating at `s_order`.
    pub fn mul_zeta(&self, z: &ZetaSeries, s_order: u32) -> Self {
        let mut out = Self::new();
        for (&(za, sa), v) in &self.terms {
            for (&(zb, sb), c) in z.iter() {
                if sa + sb <= s_order {
                    out.add_series(za + zb, sa + sb, &v.scale(c));
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self, s_order: u32) -> Self {
        let mut out = Self::new();
        for (&(za, sa), a) in &self.terms {
            for (&(zb, sb), b) in &other.terms {
                if sa + sb <= s_order {
                    out.add_series(za + zb, sa + sb, &a.mul(b));
                }
            }
        }
        out
    }
}

/// Branch-summed coefficients: `lambda exponent -> s power -> value`.
pub type LambdaMap<T> = BTreeMap<(i64, u32), T>;

/// Sums a scalar expansion over the `h` branches of `zeta`.
///
/// `zeta^a` with `h | a` becomes `h * h^{a/h} lambda^{a/h}`; every other
/// exponent is annihilated.
pub fn branch_sum(z: &ZetaSeries, h: u32) -> LambdaMap<Rational> {
    let h_rat = int(h as i64);
    let mut out: LambdaMap<Rational> = BTreeMap::new();
    for (&(a, s), c) in z.iter() {
        if a.rem_euclid(h as i64) != 0 {
            continue;
        }
        let e = a / h as i64;
        let v = c * &h_rat * pow_i(&h_rat, e);
        let slot = out.entry((e, s)).or_insert_with(Rational::zero);
        *slot += v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// [`branch_sum`] for a field with series coefficients.
pub fn branch_sum_field(f: &FieldSeries, h: u32) -> LambdaMap<TruncatedSeries> {
    let h_rat = int(h as i64);
    let mut out: LambdaMap<TruncatedSeries> = BTreeMap::new();
    for (&(a, s), v) in f.iter() {
        if a.rem_euclid(h as i64) != 0 {
            continue;
        }
        let e = a / h as i64;
        let scaled = v.scale(&(&h_rat * pow_i(&h_rat, e)));
        match out.get_mut(&(e, s)) {
            Some(x) => *x = x.add(&scaled),
            None => {
                out.insert((e, s), scaled);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Rewrites an expansion that must be integral in `lambda` (all exponents
/// divisible by `h`) in terms of `lambda`, without the branch factor.
pub fn to_lambda(z: &ZetaSeries, h: u32) -> Result<LambdaMap<Rational>> {
    let h_rat = int(h as i64);
    let mut out = BTreeMap::new();
    for (&(a, s), c) in z.iter() {
        if a.rem_euclid(h as i64) != 0 {
            return Err(Error::FractionalPower { zeta_exp: a });
        }
        let e = a / h as i64;
        out.insert((e, s), c * pow_i(&h_rat, e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_power_survives_times_h() {
        for h in 2..=5u32 {
            let z = ZetaSeries::term(h as i64, 0, int(1), 3);
            let b = branch_sum(&z, h);
            // zeta^h = h lambda, summed over h branches
            assert_eq!(b.get(&(1, 0)), Some(&int((h * h) as i64)));
            assert_eq!(b.len(), 1);
        }
    }

    #[test]
    fn fractional_power_is_killed() {
        for h in 2..=5u32 {
            for a in 1..h as i64 {
                let z = ZetaSeries::term(a, 1, int(7), 3);
                assert!(branch_sum(&z, h).is_empty());
                assert!(to_lambda(&z, h).is_err());
            }
        }
    }

    #[test]
    fn general_exponent() {
        let z = ZetaSeries::term(-6, 2, int(1), 3);
        let b = branch_sum(&z, 3);
        // 3 * (3 lambda)^{-2}
        assert_eq!(b.get(&(-2, 2)), Some(&crate::exact_series::rat(1, 3)));
    }

    #[test]
    fn s_truncation() {
        let a = ZetaSeries::term(1, 2, int(1), 3);
        assert!(a.mul(&a).is_zero());
        assert_eq!(a.pow(1), a);
    }
}
