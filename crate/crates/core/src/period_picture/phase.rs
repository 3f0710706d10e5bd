//! The phase factor `c(s) = (1+s)^{-N/(2h)} s / ((1+s)^{1/h} - 1)`, `N = h-1`,
//! and the ratio `c(s/lambda)/c(s)` attached to each branch.

use crate::boson_fock::ZetaSeries;
use crate::error::Result;
use crate::exact_series::{binomial, int, pow_i, rat, Rational, TruncatedSeries};

/// Expansion of `c(s)` together with the data needed for `c(s/lambda)/c(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseFactor {
    pub h: u32,
    /// `c_0, ..., c_order`.
    pub coeffs: Vec<Rational>,
}

/// Coefficients `c_0..=c_order` of `c(s)`, computed with series inversion.
pub fn c_series(h: u32, order: u32) -> Result<Vec<Rational>> {
    let cap = order;
    // ((1+s)^{1/h} - 1)/s = sum_j binom(1/h, j+1) s^j
    let alpha = rat(1, h as i64);
    let quotient: Vec<Rational> = (0..=order).map(|j| binomial(&alpha, j + 1)).collect();
    let q = TruncatedSeries::from_univariate(1, &quotient, cap);
    let inv = q.invert()?;
    let pre = TruncatedSeries::binomial_series(&rat(-((h - 1) as i64), 2 * h as i64), 1, cap);
    Ok(pre.mul(&inv).univariate_coeffs(1))
}

impl PhaseFactor {
    pub fn new(h: u32, order: u32) -> Result<Self> {
        Ok(Self { h, coeffs: c_series(h, order)? })
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    /// `c(s/lambda) = sum_i c_i h^i zeta^{-ih} s^i`.
    pub fn c_of_s_over_lambda(&self) -> ZetaSeries {
        let h = self.h;
        let h_rat = int(h as i64);
        let mut z = ZetaSeries::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            z.add_term(-(i as i64) * h as i64, i as u32, c * pow_i(&h_rat, i as i64));
        }
        z
    }

    /// `1/c(s)` as a `zeta`-independent expansion.
    pub fn inverse_c(&self) -> Result<ZetaSeries> {
        let cap = self.order();
        let c = TruncatedSeries::from_univariate(1, &self.coeffs, cap);
        let inv = c.invert()?.univariate_coeffs(1);
        let mut z = ZetaSeries::zero(cap);
        for (i, v) in inv.into_iter().enumerate() {
            z.add_term(0, i as u32, v);
        }
        Ok(z)
    }

    /// The branch prefactor `c(s/lambda)/c(s)`.
    pub fn ratio(&self) -> Result<ZetaSeries> {
        Ok(self.c_of_s_over_lambda().mul(&self.inverse_c()?))
    }

    pub fn c_of_s(&self) -> ZetaSeries {
        let mut z = ZetaSeries::zero(self.order());
        for (i, v) in self.coeffs.iter().enumerate() {
            z.add_term(0, i as u32, v.clone());
        }
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_coefficients() {
        for h in 2..=6u32 {
            let c = c_series(h, 3).unwrap();
            let a = rat((h * h - 1) as i64, 24 * h as i64);
            assert_eq!(c, vec![int(h as i64), int(0), a.clone(), -a]);
        }
    }

    #[test]
    fn known_h2_tail() {
        let c = c_series(2, 5).unwrap();
        assert_eq!(c[4], rat(59, 1024));
        assert_eq!(c[5], rat(-27, 512));
    }

    #[test]
    fn ratio_has_unit_constant_term() {
        let p = PhaseFactor::new(3, 4).unwrap();
        let r = p.ratio().unwrap();
        assert_eq!(r.coefficient(0, 0), int(1));
        assert!(r.iter().all(|(&(_, s), _)| s != 1));
    }
}
