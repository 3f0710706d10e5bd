//! The linear change of variables between `t_m` (m not divisible by `h`) and
//! the descendant coordinates `q_k^i`, `1 <= i <= h-1`, `k >= 0`:
//! `t_{(k+1)h - i} = q_k^i / ((h-i)(2h-i)...((k+1)h-i))`.

use crate::error::{Error, Result};
use crate::exact_series::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    TToQ,
    QToT,
}

/// Descendant label `(k, i)` of a coordinate `q_k^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QLabel {
    pub k: u32,
    pub i: u32,
}

/// One entry of the variable map: `target = scale * source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableMapEntry {
    pub t_index: u32,
    pub q: QLabel,
    pub scale: Rational,
}

pub fn t_index(q: QLabel, h: u32) -> u32 {
    (q.k + 1) * h - q.i
}

pub fn q_label(t_index: u32, h: u32) -> Result<QLabel> {
    let r = t_index % h;
    if r == 0 || t_index == 0 {
        return Err(Error::NoQPreimage { index: t_index, h });
    }
    let i = h - r;
    Ok(QLabel { k: (t_index + i) / h - 1, i })
}

/// `(h-i)(2h-i)...((k+1)h-i)`, the factor with `q_k^i = factor * t_{(k+1)h-i}`.
pub fn q_scale(q: QLabel, h: u32) -> Rational {
    let mut acc = int(1);
    for l in 1..=q.k + 1 {
        acc *= int((l * h) as i64 - q.i as i64);
    }
    acc
}

/// The map for every `t_m` with `m <= weight_cap`, `h` not dividing `m`.
pub fn change_vars_tq(direction: Direction, h: u32, weight_cap: u32) -> Result<Vec<VariableMapEntry>> {
    if h < 2 {
        return Err(Error::InvalidArgument(format!("h must be at least 2, got {h}")));
    }
    let mut out = Vec::new();
    for m in 1..=weight_cap {
        if m % h == 0 {
            continue;
        }
        let q = q_label(m, h)?;
        let c = q_scale(q, h);
        let scale = match direction {
            Direction::TToQ => c,
            Direction::QToT => c.recip(),
        };
        out.push(VariableMapEntry { t_index: m, q, scale });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::rat;

    #[test]
    fn double_factorials_for_h2() {
        for k in 0..6u32 {
            let q = QLabel { k, i: 1 };
            let mut df = 1i64;
            let mut j = 2 * k as i64 + 1;
            while j > 1 {
                df *= j;
                j -= 2;
            }
            assert_eq!(t_index(q, 2), 2 * k + 1);
            assert_eq!(q_scale(q, 2), int(df));
        }
    }

    #[test]
    fn h3_first_entry() {
        let map = change_vars_tq(Direction::QToT, 3, 2).unwrap();
        // t_2 = q_0^1 / 2
        assert_eq!(map[1].t_index, 2);
        assert_eq!(map[1].q, QLabel { k: 0, i: 1 });
        assert_eq!(map[1].scale, rat(1, 2));
    }

    #[test]
    fn weight_and_round_trip() {
        for h in 2..=6u32 {
            for m in 1..40u32 {
                match q_label(m, h) {
                    Ok(q) => {
                        assert!(q.i >= 1 && q.i < h);
                        assert_eq!(t_index(q, h), m);
                    }
                    Err(_) => assert_eq!(m % h, 0),
                }
            }
        }
    }
}
