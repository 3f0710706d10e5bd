//! Verification routines on the truncated wedge sector.

use num_traits::Zero;

use super::bracket::{alpha, generators, phi, w_bracket, DiffOp, Generator};
use super::matrix::{FiniteMatrix, RhatOperator};
use super::wedge::{as_vector, psi_apply, psi_star_apply, states, FockVector, HalfInt, WedgeState};
pub use crate::check::CheckResult;
use crate::error::Result;
use crate::exact_series::{fmt_rat, int, Rational};

/// Sector of the wedge space probed by the checks.
#[derive(Clone, Copy, Debug)]
pub struct Sector {
    pub max_charge: i64,
    pub max_energy: u32,
}

fn slot_window(sector: Sector) -> std::ops::RangeInclusive<i64> {
    let r = sector.max_charge + sector.max_energy as i64 + 2;
    -r..=r
}

fn apply_psi(i: i64, v: &FockVector) -> FockVector {
    v.map(|s| as_vector(psi_apply(HalfInt::new(1 - 2 * i), s)))
}

fn apply_psi_star(j: i64, v: &FockVector) -> FockVector {
    v.map(|s| as_vector(psi_star_apply(HalfInt::new(2 * j - 1), s)))
}

fn sum(a: &FockVector, b: &FockVector) -> FockVector {
    let mut out = a.clone();
    out.add_vector(b, &int(1));
    out
}

/// `[psi_r, psi*_s]_+ = delta_{r,-s}` and `[psi, psi]_+ = [psi*, psi*]_+ = 0`
/// on every state of the sector, for all slots that can interact with it.
pub fn check_anticommutators(sector: Sector) -> CheckResult {
    let mut res = CheckResult::new(format!(
        "anticommutators on charge <= {} energy <= {}",
        sector.max_charge, sector.max_energy
    ));
    let window = slot_window(sector);
    for st in states(sector.max_charge, sector.max_energy) {
        let v = FockVector::basis(st.clone());
        for i in window.clone() {
            let pi = apply_psi(i, &v);
            let si = apply_psi_star(i, &v);
            for j in window.clone() {
                res.cases += 1;
                // psi_{-i+1/2} psi*_{j-1/2} + psi*_{j-1/2} psi_{-i+1/2} = delta_{ij}
                let ac = sum(&apply_psi(i, &apply_psi_star(j, &v)), &apply_psi_star(j, &pi));
                let want = if i == j { v.clone() } else { FockVector::zero() };
                if ac != want {
                    res.fail(format!("[psi, psi*]_+ slots {i},{j} on {st:?}"));
                }
                if !sum(&apply_psi(i, &apply_psi(j, &v)), &apply_psi(j, &pi)).is_zero() {
                    res.fail(format!("[psi, psi]_+ slots {i},{j} on {st:?}"));
                }
                if !sum(&apply_psi_star(i, &apply_psi_star(j, &v)), &apply_psi_star(j, &si)).is_zero() {
                    res.fail(format!("[psi*, psi*]_+ slots {i},{j} on {st:?}"));
                }
            }
        }
    }
    res
}

/// `[rhat A, rhat B] - rhat [A, B]` applied to `v`.
fn defect<M: RhatOperator>(a: &M, b: &M, v: &FockVector) -> FockVector {
    let ab = a.rhat(&b.rhat(v));
    let ba = b.rhat(&a.rhat(v));
    let c = a.bracket(b).rhat(v);
    let mut out = ab;
    out.add_vector(&ba, &int(-1));
    out.add_vector(&c, &int(-1));
    out
}

/// If `d = c v` for a scalar `c`, returns it.
fn as_multiple(d: &FockVector, s: &WedgeState) -> Option<Rational> {
    if d.is_zero() {
        return Some(Rational::zero());
    }
    if d.len() == 1 {
        let c = d.coefficient(s);
        if !c.is_zero() {
            return Some(c);
        }
    }
    None
}

/// Measures the scalar defect of `rhat` on a pair of matrices over the sector;
/// `Err` describes the first state where it is not a (uniform) scalar.
pub fn measure_cocycle<M: RhatOperator>(a: &M, b: &M, sector: Sector) -> std::result::Result<Rational, String> {
    let mut value: Option<Rational> = None;
    for st in states(sector.max_charge, sector.max_energy) {
        let d = defect(a, b, &FockVector::basis(st.clone()));
        match as_multiple(&d, &st) {
            None => return Err(format!("defect is not diagonal on {st:?}")),
            Some(c) => match &value {
                None => value = Some(c),
                Some(v) if *v != c => {
                    return Err(format!("defect {} on {st:?} differs from {}", fmt_rat(&c), fmt_rat(v)))
                }
                _ => {}
            },
        }
    }
    Ok(value.unwrap_or_else(Rational::zero))
}

/// Elementary matrices `E_ij`, `E_kl` with indices in `-w..=w`: the defect is
/// a scalar on the sector.
pub fn check_projective_elementary(sector: Sector, w: i64) -> CheckResult {
    let mut res = CheckResult::new(format!("rhat projective on E_ij, |i|,|j| <= {w}"));
    let e = FiniteMatrix::elementary;
    for i in -w..=w {
        for j in -w..=w {
            for k in -w..=w {
                for l in -w..=w {
                    res.cases += 1;
                    if let Err(m) = measure_cocycle(&e(i, j), &e(k, l), sector) {
                        res.fail(format!("E_{i}{j}, E_{k}{l}: {m}"));
                    }
                }
            }
        }
    }
    res
}

/// Measured defect on the images of two generators, compared with the
/// prediction `alpha([A, B]) + h C(A, B)` of the extended embedding.
pub struct CocycleComparison {
    pub a: Generator,
    pub b: Generator,
    pub measured: Rational,
    pub expected: Rational,
}

pub fn compare_generator_cocycles(
    h: u32,
    n_window: i64,
    k_max: u32,
    sector: Sector,
) -> Result<(CheckResult, Vec<CocycleComparison>)> {
    let mut res = CheckResult::new(format!(
        "rhat of extended embedding matches bracket table, h = {h}, |n| <= {n_window}, k <= {k_max}"
    ));
    let mut rows = Vec::new();
    let gens = generators(n_window, k_max);
    for (ia, &a) in gens.iter().enumerate() {
        for &b in gens.iter().skip(ia + 1) {
            let da = DiffOp::generator(a);
            let db = DiffOp::generator(b);
            let (x, c) = w_bracket(&da, &db);
            let expected = alpha(h, &x)? + c * int(h as i64);
            res.cases += 1;
            let ma = phi(h, &da);
            let mb = phi(h, &db);
            if ma.bracket(&mb) != phi(h, &x) {
                res.fail(format!("matrix bracket of {a:?}, {b:?} is not the image of the bracket"));
            }
            match measure_cocycle(&ma, &mb, sector) {
                Ok(m) => {
                    if m != expected {
                        res.fail(format!(
                            "{a:?}, {b:?}: measured {} expected {}",
                            fmt_rat(&m),
                            fmt_rat(&expected)
                        ));
                    }
                    rows.push(CocycleComparison { a, b, measured: m, expected });
                }
                Err(m) => res.fail(format!("{a:?}, {b:?}: {m}")),
            }
        }
    }
    Ok((res, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anticommutators_small() {
        let r = check_anticommutators(Sector { max_charge: 1, max_energy: 3 });
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn elementary_projective_small() {
        let r = check_projective_elementary(Sector { max_charge: 1, max_energy: 3 }, 1);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn elementary_cocycle_values() {
        // [rhat E_ij, rhat E_ji] - rhat(E_ii - E_jj) = 1 for i <= 0 < j, else 0
        let s = Sector { max_charge: 1, max_energy: 3 };
        let e = FiniteMatrix::elementary;
        assert_eq!(measure_cocycle(&e(0, 1), &e(1, 0), s).unwrap(), int(1));
        assert_eq!(measure_cocycle(&e(1, 0), &e(0, 1), s).unwrap(), int(-1));
        assert_eq!(measure_cocycle(&e(2, 3), &e(3, 2), s).unwrap(), int(0));
    }

    #[test]
    fn generator_cocycles_h2() {
        let (r, _) = compare_generator_cocycles(2, 2, 1, Sector { max_charge: 1, max_energy: 3 }).unwrap();
        assert!(r.passed(), "{r}");
    }
}
