//! Ground-truth brackets in the central extension of the algebra of
//! differential operators on the circle, and their image in the matrix
//! algebra.
//!
//! Elements are written `lambda^n P(D)` with `D = lambda d/dlambda`. The
//! generator `G(n, k) = -lambda^{n+k} d^k` equals `-lambda^n [D]_k`, with
//! `[D]_k` the falling factorial.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::central::central_term;
use super::matrix::{BandedMatrix, Poly};
use crate::error::Result;
use crate::exact_series::{factorial, int, pow_i, rat, Rational};

/// `lambda^n P(D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    pub n: i64,
    pub poly: Poly,
}

/// Index `(n, k)` of the generator `-lambda^{n+k} d^k`.
pub type Generator = (i64, u32);

/// `[D]_k = D (D-1) ... (D-k+1)`.
pub fn falling_poly(k: u32) -> Poly {
    let mut p = Poly::constant(int(1));
    for l in 0..k as i64 {
        p = p.mul(&Poly::linear(int(1), int(-l)));
    }
    p
}

impl DiffOp {
    pub fn generator(g: Generator) -> Self {
        Self { n: g.0, poly: falling_poly(g.1).scale(&int(-1)) }
    }

    /// Expansion in generators: `lambda^n R(D) = sum_j -r_j G(n, j)` with
    /// `r_j = Delta^j R(0) / j!`.
    pub fn to_generators(&self) -> Vec<(Generator, Rational)> {
        let deg = match self.poly.degree() {
            Some(d) => d,
            None => return Vec::new(),
        };
        let mut values: Vec<Rational> = (0..=deg as i64).map(|x| self.poly.eval(&int(x))).collect();
        let mut out = Vec::new();
        for j in 0..=deg {
            let r = &values[0] / factorial(j as u32);
            if !r.is_zero() {
                out.push(((self.n, j as u32), -r));
            }
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }
}

/// Bracket of two differential operators and the cocycle `C(A, B)`:
/// `[lambda^a P, lambda^b Q] = lambda^{a+b} (P(D+b) Q(D) - Q(D+a) P(D)) + C(A, B) C`.
pub fn w_bracket(a: &DiffOp, b: &DiffOp) -> (DiffOp, Rational) {
    let p = a.poly.shift(&int(b.n)).mul(&b.poly).sub(&b.poly.shift(&int(a.n)).mul(&a.poly));
    let mut c = Rational::zero();
    if a.n == -b.n && a.n != 0 {
        if a.n > 0 {
            for r in 0..a.n {
                c += a.poly.eval(&int(r - a.n)) * b.poly.eval(&int(r));
            }
        } else {
            for r in 1..=-a.n {
                c -= a.poly.eval(&int(-a.n - r)) * b.poly.eval(&int(-r));
            }
        }
    }
    (DiffOp { n: a.n + b.n, poly: p }, c)
}

/// The scalar `alpha(lambda^n P(D)) = delta_{n,0} sum_j p_j j! a_j` of the
/// extended embedding.
pub fn alpha(h: u32, x: &DiffOp) -> Result<Rational> {
    if x.n != 0 || x.poly.is_zero() {
        return Ok(Rational::zero());
    }
    let deg = x.poly.0.len() as u32 - 1;
    let a = central_term(0, h, deg)?;
    let mut acc = Rational::zero();
    for (j, p) in x.poly.0.iter().enumerate() {
        acc += p * factorial(j as u32) * &a[j];
    }
    Ok(acc)
}

/// The matrix of `lambda^n P(D)` on `e_i = zeta^{-i-N/2}`:
/// `sum_i h^{-n} P((-i - N/2)/h) E_{i-nh, i}`.
pub fn phi(h: u32, x: &DiffOp) -> BandedMatrix {
    let hr = h as i64;
    let p = x
        .poly
        .compose_linear(&rat(-1, hr), &rat(-(hr - 1), 2 * hr))
        .scale(&pow_i(&int(hr), -x.n));
    BandedMatrix::diagonal(-x.n * hr, p)
}

/// One row of the bracket table for `[J_A, J_B]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    /// `[G_A, G_B]` without the central part, in generators.
    pub combination: Vec<(Generator, Rational)>,
    /// Central scalar in the representation: `h * C(G_A, G_B)`.
    pub central: Rational,
}

/// Expected brackets `[J_A, J_B] = sum coef J_C + central` for all generators
/// with `|n| <= n_window`, `k <= k_max`.
pub fn bracket_table(h: u32, n_window: i64, k_max: u32) -> BTreeMap<(Generator, Generator), BracketEntry> {
    let gens = generators(n_window, k_max);
    let mut out = BTreeMap::new();
    for &a in &gens {
        for &b in &gens {
            let (x, c) = w_bracket(&DiffOp::generator(a), &DiffOp::generator(b));
            out.insert((a, b), BracketEntry { combination: x.to_generators(), central: c * int(h as i64) });
        }
    }
    out
}

pub fn generators(n_window: i64, k_max: u32) -> Vec<Generator> {
    let mut g = Vec::new();
    for k in 0..=k_max {
        for n in -n_window..=n_window {
            g.push((n, k));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion_wedge::matrix::phi_matrix;

    #[test]
    fn bracket_with_itself_vanishes() {
        for g in generators(3, 2) {
            let x = DiffOp::generator(g);
            let (b, c) = w_bracket(&x, &x);
            assert!(b.poly.is_zero());
            assert!(c.is_zero());
        }
    }

    #[test]
    fn generator_round_trip() {
        for g in generators(2, 3) {
            assert_eq!(DiffOp::generator(g).to_generators(), vec![(g, int(1))]);
        }
    }

    #[test]
    fn phi_agrees_with_direct_matrix() {
        for h in 2..=4u32 {
            for g in generators(3, 3) {
                assert_eq!(phi(h, &DiffOp::generator(g)), phi_matrix(g.0, g.1, h));
            }
        }
    }

    #[test]
    fn exponential_bracket_example() {
        // [lambda e^{xD}, lambda^{-1} e^{yD}] has central part e^{-x}:
        // coefficient of x^j y^l is (-1)^j/j! if l = 0 else 0.
        for j in 0..4u32 {
            for l in 0..4u32 {
                let mut p = vec![Rational::zero(); j as usize + 1];
                p[j as usize] = int(1);
                let mut q = vec![Rational::zero(); l as usize + 1];
                q[l as usize] = int(1);
                let a = DiffOp { n: 1, poly: Poly(p) };
                let b = DiffOp { n: -1, poly: Poly(q) };
                let (_, c) = w_bracket(&a, &b);
                // j! l! [x^j y^l] e^{-x}
                let want = if l == 0 { pow_i(&int(-1), j as i64) } else { int(0) };
                assert_eq!(c, want, "j={j} l={l}");
            }
        }
    }

    #[test]
    fn matrix_bracket_is_homomorphic() {
        for h in 2..=3u32 {
            for a in generators(2, 2) {
                for b in generators(2, 2) {
                    let (x, _) = w_bracket(&DiffOp::generator(a), &DiffOp::generator(b));
                    let lhs = phi(h, &DiffOp::generator(a)).bracket(&phi(h, &DiffOp::generator(b)));
                    assert_eq!(lhs, phi(h, &x));
                }
            }
        }
    }
}
