//! The vertex operators `Gamma_a(0, lambda, s)` built from periods, and the
//! operators `W_n^k`.

use std::collections::BTreeMap;

use super::periods::phi_component;
use super::phase::PhaseFactor;
use crate::boson_fock::extract::lambda_coefficient;
use crate::boson_fock::{OperatorTable, VertexOperatorData, ZetaSeries};
use crate::error::Result;
use crate::exact_series::{int, Rational};

/// `(h-i)(2h-i)...((k+1)h-i)`.
fn q_factor(k: i64, i: i64, h: i64) -> Rational {
    let mut acc = int(1);
    for l in 1..=k + 1 {
        acc *= int(l * h - i);
    }
    acc
}

/// Quantizes `phi_a(0, lambda, s)` into vertex-operator data in the `t`
/// coordinates (`q_k^i = factor * t_{(k+1)h-i}`), modes up to `mode_cap`.
///
/// The `v_i` component at `(-z)^{-k-1}` multiplies by `-q_k^i / eps`; at
/// `(-z)^k`, `k >= 0`, it becomes `(-1)^k eps d/dt_{i+kh} / (i(i+h)...(i+kh))`.
pub fn build_gamma_a(h: u32, s_order: u32, mode_cap: u32) -> VertexOperatorData {
    let mut v = VertexOperatorData::identity(h, s_order);
    v.mode_cap = mode_cap;
    let hi = h as i64;
    let mut mult: BTreeMap<u32, ZetaSeries> = BTreeMap::new();
    let mut deriv: BTreeMap<u32, ZetaSeries> = BTreeMap::new();
    for i in 1..h {
        let ii = i as i64;
        let z_min = -((mode_cap as i64 + ii) / hi) - 1;
        let z_max = (mode_cap as i64 - ii).max(0) / hi + 1;
        let field = phi_component(h, i, s_order, z_min, z_max);
        for (&(zeta, s, z), c) in field.iter() {
            // coefficient of (-z)^z rather than z^z
            let c = &if z.rem_euclid(2) == 1 { -c } else { c.clone() };
            if z < 0 {
                let k = -z - 1;
                let m = (k + 1) * hi - ii;
                if m > mode_cap as i64 {
                    continue;
                }
                let coef = -(c * q_factor(k, ii, hi));
                mult.entry(m as u32).or_insert_with(|| ZetaSeries::zero(s_order)).add_term(zeta, s, coef);
            } else {
                let k = z;
                let m = ii + k * hi;
                if m > mode_cap as i64 {
                    continue;
                }
                // i(i+h)...(i+kh) = q_factor(k, h - i, h)
                let mut coef = c / q_factor(k, hi - ii, hi);
                if k % 2 == 1 {
                    coef = -coef;
                }
                deriv.entry(m as u32).or_insert_with(|| ZetaSeries::zero(s_order)).add_term(zeta, s, coef);
            }
        }
    }
    mult.retain(|_, z| !z.is_zero());
    deriv.retain(|_, z| !z.is_zero());
    v.mult = mult;
    v.deriv = deriv;
    v
}

/// `W_n^k`, the coefficient of `lambda^{-n-k} s^k` in
/// `sum_a c(s/lambda)/c(s) Gamma_a(0, lambda, s)`, for `k <= k_max`, `|n| <= n_window`.
pub fn extract_w(h: u32, k_max: u32, n_window: i64, weight_cap: u32) -> Result<OperatorTable> {
    let v = build_gamma_a(h, k_max.max(1), weight_cap);
    let ratio = PhaseFactor::new(h, k_max.max(1))?.ratio()?;
    let mut out = OperatorTable::new();
    for k in 0..=k_max {
        for n in -n_window..=n_window {
            out.insert((k, n), lambda_coefficient(&v, &ratio, -n - k as i64, k));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boson_fock::build_gamma_kp;

    #[test]
    fn periods_give_reduced_gamma() {
        for h in 2..=5u32 {
            for s_order in 1..=3u32 {
                let a = build_gamma_a(h, s_order, 11);
                let b = build_gamma_kp(h, s_order, 11, false).mod_h_reduce();
                assert_eq!(a, b, "h={h} s_order={s_order}");
            }
        }
    }

    #[test]
    fn w00_contains_h() {
        let t = extract_w(3, 1, 1, 6).unwrap();
        assert_eq!(t[&(0, 0)].as_scalar(), Some(int(3)));
        // no s^1 pole contributions beyond the modes
        assert!(t[&(0, 1)].is_zero());
    }
}
