//! The scalar correction in the extension of the embedding to the central
//! extension: `delta_{n,0} (e^{-xN/(2h)}/(1 - e^{x/h}) - K/(1 - e^x))` as a
//! power series in `x`, where `K` is the image of the central element.

use crate::error::{Error, Result};
use crate::exact_series::{factorial, fmt_rat, int, pow_i, rat, Rational, TruncatedSeries};

/// `x * (e^{-xN/(2h)}/(1-e^{x/h}) - K/(1-e^x))` up to `x^{order}`.
///
/// Uses `1 - e^{x/h} = -(x/h) E_h(x)` with `E_h(x) = sum_j (x/h)^j/(j+1)!`.
fn x_times_central(h: u32, k: &Rational, order: u32) -> Result<Vec<Rational>> {
    let hr = int(h as i64);
    let n_big = (h - 1) as i64;
    let e_h: Vec<Rational> = (0..=order).map(|j| pow_i(&hr, -(j as i64)) / factorial(j + 1)).collect();
    let e_1: Vec<Rational> = (0..=order).map(|j| factorial(j + 1).recip()).collect();
    let expo: Vec<Rational> = (0..=order)
        .map(|j| pow_i(&rat(-n_big, 2 * h as i64), j as i64) / factorial(j))
        .collect();
    let inv_h = TruncatedSeries::from_univariate(1, &e_h, order).invert()?;
    let inv_1 = TruncatedSeries::from_univariate(1, &e_1, order).invert()?;
    let ex = TruncatedSeries::from_univariate(1, &expo, order);
    let s = ex.mul(&inv_h).scale(&-hr).add(&inv_1.scale(k));
    Ok(s.univariate_coeffs(1))
}

/// Residue at `x = 0` for a given central value `K`; zero exactly when `K = h`.
pub fn central_residue(h: u32, k: &Rational) -> Result<Rational> {
    Ok(x_times_central(h, k, 0)?[0].clone())
}

/// Coefficients `a_0..=a_{x_order}` for central value `K`; errors if the pole
/// does not cancel.
pub fn central_term_with(n: i64, h: u32, k: &Rational, x_order: u32) -> Result<Vec<Rational>> {
    if n != 0 {
        return Ok(vec![int(0); x_order as usize + 1]);
    }
    let v = x_times_central(h, k, x_order + 1)?;
    if v[0] != int(0) {
        return Err(Error::PoleNotCancelled { residue: fmt_rat(&v[0]) });
    }
    Ok(v[1..].to_vec())
}

/// The correction with `K = h`, the only value with no pole.
pub fn central_term(n: i64, h: u32, x_order: u32) -> Result<Vec<Rational>> {
    central_term_with(n, h, &int(h as i64), x_order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_values() {
        assert_eq!(central_term(0, 2, 3).unwrap(), vec![int(0), rat(-1, 16), rat(1, 32), rat(-17, 3072)]);
        assert_eq!(central_term(0, 3, 3).unwrap(), vec![int(0), rat(-1, 9), rat(1, 18), rat(-5, 486)]);
    }

    #[test]
    fn linear_coefficient_closed_form() {
        for h in 2..=7u32 {
            let a = central_term(0, h, 1).unwrap();
            assert_eq!(a[1], -rat((h * h - 1) as i64, 24 * h as i64));
        }
    }

    #[test]
    fn nonzero_n_vanishes() {
        assert!(central_term(2, 3, 4).unwrap().iter().all(|c| *c == int(0)));
    }

    #[test]
    fn only_k_equal_h_cancels_the_pole() {
        for h in 2..=6u32 {
            for k in -3..=12i64 {
                let r = central_residue(h, &int(k)).unwrap();
                assert_eq!(r, int(k - h as i64));
                assert_eq!(central_term_with(0, h, &int(k), 2).is_ok(), k == h as i64);
            }
        }
    }
}
