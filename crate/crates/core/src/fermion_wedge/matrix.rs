//! Infinite matrices with finitely many nonzero diagonals whose entries are
//! polynomials in the column index, and their action through `rhat`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::wedge::{rhat_apply, FockVector, WedgeState};
use crate::exact_series::{binomial, int, pow_i, rat, Rational};

/// Dense polynomial `sum c_j i^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn constant(c: Rational) -> Self {
        Self(vec![c]).trimmed()
    }

    /// The polynomial `a i + b`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self(vec![b, a]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        let t = self.clone().trimmed();
        if t.0.is_empty() {
            None
        } else {
            Some(t.0.len() - 1)
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![Rational::zero(); n];
        for (j, c) in self.0.iter().enumerate() {
            v[j] += c;
        }
        for (j, c) in other.0.iter().enumerate() {
            v[j] += c;
        }
        Poly(v).trimmed()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&int(-1)))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::default();
        }
        let mut v = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (a, x) in self.0.iter().enumerate() {
            for (b, y) in other.0.iter().enumerate() {
                v[a + b] += x * y;
            }
        }
        Poly(v).trimmed()
    }

    /// `p(i + e)`.
    pub fn shift(&self, e: &Rational) -> Poly {
        let mut out = Poly::default();
        for (j, c) in self.0.iter().enumerate() {
            // (i + e)^j = sum_r C(j, r) e^{j-r} i^r
            let mut v = vec![Rational::zero(); j + 1];
            for (r, slot) in v.iter_mut().enumerate() {
                *slot = binomial(&int(j as i64), r as u32) * pow_i(e, (j - r) as i64) * c;
            }
            out = out.add(&Poly(v));
        }
        out
    }

    /// `p(a i + b)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Poly {
        let lin = Poly::linear(a.clone(), b.clone());
        let mut out = Poly::default();
        let mut power = Poly::constant(Rational::one());
        for c in &self.0 {
            out = out.add(&power.scale(c));
            power = power.mul(&lin);
        }
        out
    }
}

/// `sum_d sum_i coef_d(i) E_{i+d, i}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BandedMatrix {
    pub diagonals: BTreeMap<i64, Poly>,
}

impl BandedMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn diagonal(offset: i64, p: Poly) -> Self {
        let mut m = Self::zero();
        m.add_diagonal(offset, &p);
        m
    }

    pub fn add_diagonal(&mut self, offset: i64, p: &Poly) {
        let e = self.diagonals.entry(offset).or_default();
        *e = e.add(p);
        if e.is_zero() {
            self.diagonals.remove(&offset);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&d, p) in &other.diagonals {
            out.add_diagonal(d, p);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&d, p) in &self.diagonals {
            out.add_diagonal(d, &p.scale(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.diagonals.is_empty()
    }

    /// Entry at row `r`, column `c`.
    pub fn entry(&self, r: i64, c: i64) -> Rational {
        self.diagonals.get(&(r - c)).map(|p| p.eval(&int(c))).unwrap_or_else(Rational::zero)
    }

    /// Matrix product: `(A B)_{i+d+e, i} = a_d(i+e) b_e(i)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&d, a) in &self.diagonals {
            for (&e, b) in &other.diagonals {
                out.add_diagonal(d + e, &a.shift(&int(e)).mul(b));
            }
        }
        out
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self).scale(&int(-1)))
    }

    /// `rhat` of the matrix applied to one state.
    ///
    /// Only finitely many `E_{i+d,i}` act nontrivially: for `i` below the
    /// lowest hole (minus the offset) both slots are filled, and above the
    /// top slot both are empty.
    pub fn rhat_state(&self, s: &WedgeState) -> FockVector {
        let mut out = FockVector::zero();
        let lo = s.lowest_hole().min(1);
        let hi = s.top().max(0);
        for (&d, p) in &self.diagonals {
            let from = lo - d.abs() - 1;
            let to = hi + d.abs() + 1;
            for i in from..=to {
                if let Some((t, sign)) = rhat_apply(i + d, i, s) {
                    out.add(t, p.eval(&int(i)) * int(sign));
                }
            }
        }
        out
    }

    pub fn rhat(&self, v: &FockVector) -> FockVector {
        v.map(|s| self.rhat_state(s))
    }
}


/// Operators that act on the wedge space through `rhat` and close under brackets.
pub trait RhatOperator: Sized {
    fn rhat_state(&self, s: &WedgeState) -> FockVector;
    fn bracket(&self, other: &Self) -> Self;

    fn rhat(&self, v: &FockVector) -> FockVector {
        v.map(|s| self.rhat_state(s))
    }
}

impl RhatOperator for BandedMatrix {
    fn rhat_state(&self, s: &WedgeState) -> FockVector {
        BandedMatrix::rhat_state(self, s)
    }

    fn bracket(&self, other: &Self) -> Self {
        BandedMatrix::bracket(self, other)
    }
}

/// Matrix with finitely many nonzero entries, `(row, column) -> value`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteMatrix {
    pub entries: BTreeMap<(i64, i64), Rational>,
}

impl FiniteMatrix {
    /// The elementary matrix `E_ij`.
    pub fn elementary(i: i64, j: i64) -> Self {
        let mut m = Self::default();
        m.entries.insert((i, j), int(1));
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(r, c), x) in &self.entries {
            for (&(r2, c2), y) in &other.entries {
                if c == r2 {
                    let e = out.entries.entry((r, c2)).or_insert_with(Rational::zero);
                    *e += x * y;
                }
            }
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }
}

impl RhatOperator for FiniteMatrix {
    fn rhat_state(&self, s: &WedgeState) -> FockVector {
        let mut out = FockVector::zero();
        for (&(i, j), c) in &self.entries {
            if let Some((t, sign)) = rhat_apply(i, j, s) {
                out.add(t, c * int(sign));
            }
        }
        out
    }

    fn bracket(&self, other: &Self) -> Self {
        let mut out = self.mul(other);
        for (k, v) in other.mul(self).entries {
            let e = out.entries.entry(k).or_insert_with(Rational::zero);
            *e -= v;
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }
}

/// The image of `-lambda^{n+k} d^k` with basis `e_i = zeta^{-i-N/2}`,
/// `zeta = (h lambda)^{1/h}`:
/// `-h^{-n-k} sum_i prod_{l<k} (-i - N/2 - l h) E_{i-nh, i}`.
pub fn phi_matrix(n: i64, k: u32, h: u32) -> BandedMatrix {
    let n_big = (h - 1) as i64;
    let mut p = Poly::constant(-pow_i(&int(h as i64), -n - k as i64));
    for l in 0..k as i64 {
        // -i - N/2 - l h
        p = p.mul(&Poly::linear(int(-1), rat(-n_big, 2) - int(l * h as i64)));
    }
    BandedMatrix::diagonal(-n * h as i64, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_identity() {
        let m = phi_matrix(0, 0, 3);
        for i in -5..5 {
            assert_eq!(m.entry(i, i), int(-1));
            assert_eq!(m.entry(i + 1, i), int(0));
        }
    }

    #[test]
    fn h2_n1_k1_entries() {
        let m = phi_matrix(1, 1, 2);
        for i in -5..5i64 {
            // -(1/4)(-i - 1/2) on offset -2
            assert_eq!(m.entry(i - 2, i), rat(-1, 4) * (int(-i) - rat(1, 2)));
        }
    }

    #[test]
    fn k0_is_scalar_diagonal() {
        for h in 2..=4u32 {
            for n in -3..=3i64 {
                let m = phi_matrix(n, 0, h);
                assert_eq!(m.diagonals.len(), 1);
                assert_eq!(m.diagonals[&(-n * h as i64)], Poly::constant(-pow_i(&int(h as i64), -n)));
            }
        }
    }

    #[test]
    fn product_matches_entries() {
        let a = phi_matrix(1, 2, 2);
        let b = phi_matrix(-1, 1, 2);
        let ab = a.mul(&b);
        for r in -6..6i64 {
            for c in -6..6i64 {
                let mut want = Rational::zero();
                for j in -20..20 {
                    want += a.entry(r, j) * b.entry(j, c);
                }
                assert_eq!(ab.entry(r, c), want);
            }
        }
    }
}
