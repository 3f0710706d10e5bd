use std::collections::BTreeMap;

use super::zeta::{FieldSeries, ZetaSeries};
use crate::exact_series::{binomial, factorial, int, pow_i, rat, Monomial, TruncatedSeries};

/// Exponents of a normally ordered vertex operator
/// `exp(eps^{-1} (shift + sum_n mult[n] t_n)) exp(eps sum_n deriv[n] d/dt_n)`,
/// with coefficients expanded in `zeta` and `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOperatorData {
    pub h: u32,
    pub s_order: u32,
    /// Largest index `n` kept in either part.
    pub mode_cap: u32,
    pub mult: BTreeMap<u32, ZetaSeries>,
    pub deriv: BTreeMap<u32, ZetaSeries>,
    /// t-independent part of the multiplication exponent (from the dilaton shift).
    pub shift: ZetaSeries,
}

impl VertexOperatorData {
    pub fn identity(h: u32, s_order: u32) -> Self {
        Self {
            h,
            s_order,
            mode_cap: 0,
            mult: BTreeMap::new(),
            deriv: BTreeMap::new(),
            shift: ZetaSeries::zero(s_order),
        }
    }

    /// Coefficient of the mode `J_m` in the exponent.
    pub fn mode_coefficient(&self, m: i64) -> ZetaSeries {
        let zero = ZetaSeries::zero(self.s_order);
        if m < 0 {
            self.mult.get(&((-m) as u32)).map(|z| z.scale(&rat(1, -m))).unwrap_or(zero)
        } else if m > 0 {
            self.deriv.get(&(m as u32)).cloned().unwrap_or(zero)
        } else {
            zero
        }
    }

    /// Sets the coefficients of `t_{kh}` and `d/dt_{kh}` to zero.
    pub fn mod_h_reduce(&self) -> Self {
        let h = self.h;
        let mut out = self.clone();
        out.mult.retain(|&n, _| n % h != 0);
        out.deriv.retain(|&n, _| n % h != 0);
        out
    }

    /// Composes with `t_{h+1} -> t_{h+1} - 1/(h+1)`.
    pub fn with_dilaton(&self) -> Self {
        let mut out = self.clone();
        if let Some(m) = self.mult.get(&(self.h + 1)) {
            out.shift = out.shift.add(&m.scale(&rat(-1, (self.h + 1) as i64)));
        }
        out
    }
}

/// Expansion of `w^n`, `w = zeta (1 + s/lambda)^{1/h}`, `lambda = zeta^h / h`,
/// up to `s^s_order`, skipping the `j = 0` term.
fn w_power_minus_zeta_power(h: u32, n: i64, s_order: u32) -> ZetaSeries {
    let mut z = ZetaSeries::zero(s_order);
    let alpha = rat(n, h as i64);
    let h_rat = int(h as i64);
    for j in 1..=s_order {
        let c = binomial(&alpha, j) * pow_i(&h_rat, j as i64);
        z.add_term(n - (j * h) as i64, j, c);
    }
    z
}

/// The vertex operator `Gamma(w, zeta)` with `w = (h(lambda+s))^{1/h}`,
/// `zeta = (h lambda)^{1/h}`, modes up to `mode_cap`.
pub fn build_gamma_kp(h: u32, s_order: u32, mode_cap: u32, dilaton: bool) -> VertexOperatorData {
    let mut v = VertexOperatorData::identity(h, s_order);
    v.mode_cap = mode_cap;
    for n in 1..=mode_cap {
        let up = w_power_minus_zeta_power(h, n as i64, s_order);
        v.mult.insert(n, up.scale(&int(-1)));
        let down = w_power_minus_zeta_power(h, -(n as i64), s_order);
        v.deriv.insert(n, down.scale(&rat(1, n as i64)));
    }
    if dilaton {
        v.with_dilaton()
    } else {
        v
    }
}

/// Exponent of the factor relating the reduced and full operators:
/// `redGamma D = exp(eps^{-1} X) Gamma D` for `D` independent of `t_{kh}`, where
/// `X = sum_k t_{kh} h^k ((lambda+s)^k - lambda^k)`, expanded by the binomial theorem.
pub fn reduction_factor_exponent(h: u32, s_order: u32, weight_cap: u32) -> FieldSeries {
    let mut f = FieldSeries::new();
    let h_rat = int(h as i64);
    let mut k = 1u32;
    while k * h <= weight_cap {
        for j in 1..=k.min(s_order) {
            // h^k C(k,j) lambda^{k-j} s^j, with lambda^{e} = h^{-e} zeta^{eh}
            let c = pow_i(&h_rat, k as i64) * binomial(&int(k as i64), j) * pow_i(&h_rat, -((k - j) as i64));
            let t = TruncatedSeries::monomial(Monomial::from_exponents([(k * h, 1)], -1), c, weight_cap);
            f.add_series(((k - j) * h) as i64, j, &t);
        }
        k += 1;
    }
    f
}

/// `exp(X)` for a field whose terms all carry positive `s` power.
pub fn field_exp(x: &FieldSeries, s_order: u32, weight_cap: u32) -> FieldSeries {
    let mut one = FieldSeries::new();
    one.add_series(0, 0, &TruncatedSeries::one(weight_cap));
    let mut acc = one.clone();
    let mut p = one;
    for j in 1..=s_order {
        p = p.mul(x, s_order);
        if p.is_zero() {
            break;
        }
        let mut scaled = FieldSeries::new();
        let inv = factorial(j).recip();
        for (&(z, s), v) in p.iter() {
            scaled.add_series(z, s, &v.scale(&inv));
        }
        for (&(z, s), v) in scaled.iter() {
            acc.add_series(z, s, v);
        }
    }
    acc
}

/// Multiplication exponent `eps^{-1}(shift + sum mult[n] t_n)` as a field.
fn mult_exponent(v: &VertexOperatorData, weight_cap: u32) -> FieldSeries {
    let mut x = FieldSeries::new();
    for (&n, coef) in &v.mult {
        if n > weight_cap {
            continue;
        }
        for (&(z, s), c) in coef.iter() {
            let t = TruncatedSeries::monomial(Monomial::from_exponents([(n, 1)], -1), c.clone(), weight_cap);
            x.add_series(z, s, &t);
        }
    }
    for (&(z, s), c) in v.shift.iter() {
        x.add_series(z, s, &TruncatedSeries::monomial(Monomial::eps(-1), c.clone(), weight_cap));
    }
    x
}

/// `(t_n + eps P_n)^a` as a field.
fn shifted_power(n: u32, a: u32, p: &ZetaSeries, s_order: u32, weight_cap: u32) -> FieldSeries {
    let mut base = FieldSeries::new();
    base.add_series(0, 0, &TruncatedSeries::var(n, weight_cap));
    for (&(z, s), c) in p.iter() {
        base.add_series(z, s, &TruncatedSeries::monomial(Monomial::eps(1), c.clone(), weight_cap));
    }
    let mut acc = FieldSeries::new();
    acc.add_series(0, 0, &TruncatedSeries::one(weight_cap));
    for _ in 0..a {
        acc = acc.mul(&base, s_order);
    }
    acc
}

/// Applies the vertex operator to `d`: shift the arguments by the derivation
/// part, then multiply by the exponential of the multiplication part.
///
/// Output keeps `d`'s weight cap; terms beyond `s_order` are dropped. Exact
/// below the cap provided `v.mode_cap >= d.weight_cap()`.
pub fn apply_vertex(v: &VertexOperatorData, d: &TruncatedSeries) -> FieldSeries {
    let cap = d.weight_cap();
    let s_order = v.s_order;
    if v.mode_cap < cap && !v.mult.is_empty() {
        log::debug!("vertex mode cap {} below series cap {}; high modes truncated", v.mode_cap, cap);
    }
    let zero = ZetaSeries::zero(s_order);
    let mut powers: BTreeMap<(u32, u32), FieldSeries> = BTreeMap::new();
    let mut shifted = FieldSeries::new();
    for (m, c) in d.iter() {
        let mut term = FieldSeries::new();
        term.add_series(0, 0, &TruncatedSeries::monomial(Monomial::eps(m.eps_power()), c.clone(), cap));
        for &(n, a) in m.vars() {
            let p = powers.entry((n, a)).or_insert_with(|| {
                shifted_power(n, a, v.deriv.get(&n).unwrap_or(&zero), s_order, cap)
            });
            term = term.mul(p, s_order);
        }
        for (&(z, s), t) in term.iter() {
            shifted.add_series(z, s, t);
        }
    }
    let e = field_exp(&mult_exponent(v, cap), s_order, cap);
    e.mul(&shifted, s_order)
}

/// Drops terms of a field whose coefficient vanishes, for comparisons.
pub fn field_difference(a: &FieldSeries, b: &FieldSeries) -> Vec<((i64, u32), TruncatedSeries)> {
    let mut keys: Vec<(i64, u32)> = a.iter().map(|(k, _)| *k).collect();
    keys.extend(b.iter().map(|(k, _)| *k));
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for k in keys {
        let x = a.get(k.0, k.1);
        let y = b.get(k.0, k.1);
        let diff = match (x, y) {
            (Some(x), Some(y)) => x.sub(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.neg(),
            (None, None) => continue,
        };
        if !diff.is_zero() {
            out.push((k, diff));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_vertex_is_identity() {
        let d = TruncatedSeries::var(1, 4).add(&TruncatedSeries::var(3, 4).scale(&int(2)));
        let v = VertexOperatorData::identity(2, 3);
        let out = apply_vertex(&v, &d);
        let mut want = FieldSeries::new();
        want.add_series(0, 0, &d);
        assert_eq!(out, want);
    }

    #[test]
    fn action_on_one_is_exponential() {
        let v = build_gamma_kp(2, 2, 4, false);
        let out = apply_vertex(&v, &TruncatedSeries::one(4));
        // s^1 coefficient: eps^{-1} sum_n mult[n]_1 t_n
        let mut x = FieldSeries::new();
        for (&n, c) in &v.mult {
            for (&(z, s), r) in c.iter() {
                if s == 1 {
                    x.add_series(z, s, &TruncatedSeries::monomial(Monomial::from_exponents([(n, 1)], -1), r.clone(), 4));
                }
            }
        }
        for (&(z, s), t) in x.iter() {
            assert_eq!(out.get(z, s), Some(t));
        }
    }

    #[test]
    fn dropped_factor_first_order() {
        // k = 1 at s^1: h t_h eps^{-1}
        for h in 2..=4u32 {
            let f = reduction_factor_exponent(h, 1, 2 * h);
            let t = f.get(0, 1).unwrap();
            let want = TruncatedSeries::monomial(Monomial::from_exponents([(h, 1)], -1), int(h as i64), 2 * h);
            assert_eq!(t, &want);
        }
    }

    #[test]
    fn reduce_leaves_coprime_modes() {
        let v = build_gamma_kp(3, 2, 7, false);
        let r = v.mod_h_reduce();
        assert!(r.mult.keys().all(|n| n % 3 != 0));
        assert_eq!(r.mult.get(&2), v.mult.get(&2));
        assert_eq!(r.mod_h_reduce(), r);
    }
}
