//! Sparse graded series over exact rationals.
//!
//! Variables are `t_n` (n >= 1) of weight `n`, plus an integer power of the
//! formal parameter `eps`. A [`TruncatedSeries`] keeps every monomial of
//! total t-weight at most `weight_cap` and eps-power at least `eps_floor`.

mod monomial;
mod series;

pub use monomial::Monomial;
pub use series::TruncatedSeries;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The only scalar type used by the crate.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Generalized binomial coefficient `alpha choose j` for rational `alpha`.
pub fn binomial(alpha: &Rational, j: u32) -> Rational {
    let mut acc = Rational::one();
    for l in 0..j {
        acc *= alpha - int(l as i64);
    }
    acc / factorial(j)
}

/// `base^e` for an integer exponent, possibly negative.
pub fn pow_i(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        assert!(!base.is_zero(), "zero to a negative power");
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Falling factorial `x (x-1) ... (x-j+1)`.
pub fn falling(x: i64, j: u32) -> Rational {
    let mut acc = BigInt::one();
    for l in 0..j as i64 {
        acc *= x - l;
    }
    Rational::from_integer(acc)
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Product of dense univariate coefficient vectors, truncated after `order`.
pub fn poly_mul(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_of_fraction() {
        // (1/2 choose 2) = (1/2)(-1/2)/2
        assert_eq!(binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&int(3), 5), int(0));
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow_i(&int(2), -3), rat(1, 8));
        assert_eq!(pow_i(&rat(2, 3), 2), rat(4, 9));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 3), int(60));
        assert_eq!(falling(-2, 2), int(6));
        assert_eq!(falling(7, 0), int(1));
    }
}
