//! Periods at `t = 0`. Every pairing `(I^{(n)}(0, lambda), v_i)` is a single
//! power of `h lambda`, stored as an exponent over `h`: the key `e` stands for
//! `(h lambda)^{e/h} = zeta^e`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::check::CheckResult;
use crate::exact_series::{factorial, int, Rational};

/// `coef * (h lambda)^{zeta_exp / h}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodTerm {
    pub coef: Rational,
    pub zeta_exp: i64,
}

impl PeriodTerm {
    /// `d/dlambda`, using `d/dlambda (h lambda)^{e/h} = e (h lambda)^{(e-h)/h}`.
    pub fn derivative(&self, h: u32) -> PeriodTerm {
        PeriodTerm { coef: &self.coef * int(self.zeta_exp), zeta_exp: self.zeta_exp - h as i64 }
    }
}

/// `(I^{(n)}(0, lambda), v_i)` for `1 <= i <= h-1`.
pub fn period_t0(n: i64, i: u32, h: u32) -> PeriodTerm {
    assert!(i >= 1 && i < h, "index i = {i} out of range for h = {h}");
    let (i, h) = (i as i64, h as i64);
    if n >= 0 {
        let mut c = int(1);
        for l in 0..n {
            c *= int(i + l * h);
        }
        if n % 2 == 1 {
            c = -c;
        }
        PeriodTerm { coef: c, zeta_exp: -n * h - i }
    } else {
        let k = -n - 1;
        let mut d = int(1);
        for l in 1..=k + 1 {
            d *= int(l * h - i);
        }
        PeriodTerm { coef: d.recip(), zeta_exp: (k + 1) * h - i }
    }
}

/// `d/dlambda I^{(n)} = I^{(n+1)}` on the closed forms for every
/// `2 <= h <= h_max`, `1 <= i < h`, `n_min <= n <= n_max`.
pub fn check_period_recurrence(h_max: u32, n_min: i64, n_max: i64) -> CheckResult {
    let mut res = CheckResult::new(format!("period recurrence, h <= {h_max}, {n_min} <= n <= {n_max}"));
    for h in 2..=h_max {
        for i in 1..h {
            for n in n_min..=n_max {
                res.cases += 1;
                let lhs = period_t0(n, i, h).derivative(h);
                let rhs = period_t0(n + 1, i, h);
                if lhs != rhs {
                    res.fail(format!("h = {h}, i = {i}, n = {n}: {lhs:?} vs {rhs:?}"));
                }
            }
        }
    }
    res
}

/// Sparse field `(zeta exponent, s power, z power) -> Rational` over a fixed `h`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentField {
    pub h: u32,
    terms: BTreeMap<(i64, u32, i64), Rational>,
}

impl LaurentField {
    pub fn new(h: u32) -> Self {
        Self { h, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, zeta: i64, s: u32, z: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (zeta, s, z);
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, u32, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term-by-term `d/dlambda`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::new(self.h);
        for (&(e, s, z), c) in &self.terms {
            out.add_term(e - self.h as i64, s, z, c * int(e));
        }
        out
    }
}

/// The `v_i` component of `phi_a(0, lambda, s) = sum_{k>=1} sum_n I^{(n+k)}(-z)^n s^k/k!`
/// for `z` powers in `z_min..=z_max`.
pub fn phi_component(h: u32, i: u32, s_order: u32, z_min: i64, z_max: i64) -> LaurentField {
    let mut f = LaurentField::new(h);
    for k in 1..=s_order {
        let inv = factorial(k).recip();
        for n in z_min..=z_max {
            let p = period_t0(n + k as i64, i, h);
            let sign = if n.rem_euclid(2) == 1 { int(-1) } else { int(1) };
            f.add_term(p.zeta_exp, k, n, &p.coef * &inv * sign);
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rat;

    #[test]
    fn base_cases() {
        assert_eq!(period_t0(0, 2, 5), PeriodTerm { coef: int(1), zeta_exp: -2 });
        assert_eq!(period_t0(1, 2, 5), PeriodTerm { coef: int(-2), zeta_exp: -7 });
        assert_eq!(period_t0(-1, 2, 5), PeriodTerm { coef: rat(1, 3), zeta_exp: 3 });
    }

    #[test]
    fn recurrence_holds() {
        for h in 2..=6u32 {
            for i in 1..h {
                for n in -6..=6i64 {
                    assert_eq!(period_t0(n, i, h).derivative(h), period_t0(n + 1, i, h));
                }
            }
        }
    }

    #[test]
    fn field_derivative_shifts_taylor_index() {
        // d/dlambda of the s^k coefficient at z^n equals the s^{k+1} coefficient
        // at z^n times (k+1), since both are I^{(n+k+1)}.
        let f = phi_component(3, 1, 3, -2, 2);
        let d = f.derivative();
        for (&(e, s, z), c) in d.iter() {
            if s < 3 {
                let want = f.iter().find(|(&(e2, s2, z2), _)| e2 == e && s2 == s + 1 && z2 == z).map(|(_, v)| v.clone());
                assert_eq!(Some(c * rat(1, s as i64 + 1)), want);
            }
        }
    }
}
