//! Correlator tables, their insertion labels, and the generating series `D`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::boson_fock::{basis_monomials, q_label, q_scale, t_index, QLabel};
use crate::error::{Error, Result};
use crate::exact_series::{factorial, Monomial, Rational, TruncatedSeries};

/// `v_i psi^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Insertion {
    pub i: u32,
    pub k: u32,
}

impl Insertion {
    pub fn from_t_index(m: u32, h: u32) -> Result<Self> {
        let q = q_label(m, h)?;
        Ok(Self { i: q.i, k: q.k })
    }

    pub fn t_index(self, h: u32) -> u32 {
        t_index(QLabel { k: self.k, i: self.i }, h)
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}psi^{}", self.i, self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub g_max: u32,
    pub weight_max: u32,
}

/// Multiset of `t`-indices as a monomial with eps-power 0.
pub type IndexSet = Monomial;

pub fn render_insertions(ins: &[Insertion]) -> String {
    let parts: Vec<String> = ins.iter().map(|x| x.to_string()).collect();
    format!("<{}>", parts.join(" "))
}

/// Correlators `<v_{i_1} psi^{k_1} ... >_g` keyed by genus and the multiset
/// of `t`-indices `(k+1)h - i` of the insertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatorTable {
    pub h: u32,
    pub caps: Caps,
    entries: BTreeMap<(u32, IndexSet), Rational>,
    /// Keys inside the caps that are absent read as zero instead of raising
    /// [`Error::MissingEntry`].
    pub implicit_zeros: bool,
}

impl CorrelatorTable {
    pub fn new(h: u32, caps: Caps) -> Self {
        Self { h, caps, entries: BTreeMap::new(), implicit_zeros: false }
    }

    pub fn insert(&mut self, g: u32, key: IndexSet, value: Rational) {
        debug_assert_eq!(key.eps_power(), 0);
        self.entries.insert((g, key), value);
    }

    pub fn insert_insertions(&mut self, g: u32, ins: &[Insertion], value: Rational) {
        let key = Monomial::from_indices(&ins.iter().map(|x| x.t_index(self.h)).collect::<Vec<_>>(), 0);
        self.insert(g, key, value);
    }

    pub fn get(&self, g: u32, key: &IndexSet) -> Option<&Rational> {
        self.entries.get(&(g, key.clone()))
    }

    /// Value of `<insertions>_g`; insertions are given in any order.
    pub fn value(&self, g: u32, ins: &[Insertion]) -> Option<&Rational> {
        let key = Monomial::from_indices(&ins.iter().map(|x| x.t_index(self.h)).collect::<Vec<_>>(), 0);
        self.get(g, &key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &IndexSet, &Rational)> {
        self.entries.iter().map(|((g, k), v)| (*g, k, v))
    }

    pub fn insertions(&self, key: &IndexSet) -> Vec<Insertion> {
        let mut v: Vec<Insertion> = key
            .indices()
            .into_iter()
            .map(|m| Insertion::from_t_index(m, self.h).expect("table keys avoid multiples of h"))
            .collect();
        v.sort();
        v
    }

    /// Entries in output order: genus, then weight, then insertions.
    pub fn sorted_entries(&self) -> Vec<(u32, Vec<Insertion>, &Rational)> {
        let mut v: Vec<(u32, u32, Vec<Insertion>, &Rational)> =
            self.iter().map(|(g, k, val)| (g, k.weight(), self.insertions(k), val)).collect();
        v.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        v.into_iter().map(|(g, _, ins, val)| (g, ins, val)).collect()
    }

    /// Same entries with the cap raised or lowered; entries beyond the new
    /// caps are dropped.
    pub fn restricted(&self, caps: Caps) -> Self {
        let mut out = Self::new(self.h, caps);
        out.implicit_zeros = self.implicit_zeros;
        for (g, k, v) in self.iter() {
            if g <= caps.g_max && k.weight() <= caps.weight_max {
                out.insert(g, k.clone(), v.clone());
            }
        }
        out
    }
}

/// Every correlator key of genus <= `g_max` and weight <= `weight_max`, with
/// no insertion index divisible by `h`.
pub fn correlator_keys(h: u32, caps: Caps) -> Vec<(u32, IndexSet)> {
    let monos: Vec<Monomial> =
        basis_monomials(caps.weight_max, Some(h)).into_iter().filter(|m| !m.is_t_constant()).collect();
    (0..=caps.g_max).flat_map(|g| monos.iter().map(move |m| (g, m.clone()))).collect()
}

/// Coefficient of `eps^{2g-2} t^T` in `log D`: `<T>_g prod c_m^{a_m} / a_m!`.
pub fn f_coefficient(h: u32, key: &IndexSet, value: &Rational) -> Rational {
    let mut c = value.clone();
    for &(m, a) in key.vars() {
        let q = q_label(m, h).expect("table keys avoid multiples of h");
        let s = q_scale(q, h);
        for _ in 0..a {
            c *= &s;
        }
        c /= factorial(a);
    }
    c
}

/// `log D` truncated at `weight_cap`: correlators of weight above the
/// table's own cap are taken as zero.
pub fn assemble_f(table: &CorrelatorTable, weight_cap: u32, eps_floor: i32) -> Result<TruncatedSeries> {
    let mut f = TruncatedSeries::zero_with_floor(weight_cap, eps_floor);
    let caps = Caps { g_max: table.caps.g_max, weight_max: weight_cap.min(table.caps.weight_max) };
    for (g, key) in correlator_keys(table.h, caps) {
        let value = match table.get(g, &key) {
            Some(v) => v.clone(),
            None if table.implicit_zeros => continue,
            None => {
                return Err(Error::MissingEntry { g, insertions: render_insertions(&table.insertions(&key)) });
            }
        };
        if value.is_zero() {
            continue;
        }
        f.add_term(key.with_eps(2 * g as i32 - 2), f_coefficient(table.h, &key, &value));
    }
    Ok(f)
}

/// `D = exp(sum eps^{2g-2} <...>_g q^.../n!)` in unshifted `t`-variables.
pub fn assemble_d(table: &CorrelatorTable, weight_cap: u32, eps_floor: i32) -> Result<TruncatedSeries> {
    assemble_f(table, weight_cap, eps_floor)?.exp()
}

/// Floor below which no eps-power of `D` at weight <= `weight_cap` can lie.
pub fn safe_eps_floor(weight_cap: u32) -> i32 {
    -(2 * weight_cap as i32) - 2
}

/// Degree-compatibility predicate for a nonzero correlator:
/// `2g - 2 - sum m_j` divisible by `h`, with `m_j = h - 1 - i_j`.
pub fn spin_selection_filter(g: u32, insertions: &[Insertion], h: u32) -> bool {
    let n = h as i64 - 1;
    let s: i64 = insertions.iter().map(|x| n - x.i as i64).sum();
    (2 * g as i64 - 2 - s).rem_euclid(h as i64) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::{int, rat};

    #[test]
    fn empty_table_gives_one() {
        let mut t = CorrelatorTable::new(2, Caps { g_max: 0, weight_max: 0 });
        t.implicit_zeros = false;
        let d = assemble_d(&t, 6, safe_eps_floor(6)).unwrap();
        assert_eq!(d, TruncatedSeries::one(6).with_eps_floor(safe_eps_floor(6)));
    }

    #[test]
    fn single_genus_zero_entry() {
        // <tau_0^3>_0 = 1 at h = 2: q_0 = t_1, D = exp(eps^-2 t_1^3 / 6)
        let mut t = CorrelatorTable::new(2, Caps { g_max: 0, weight_max: 3 });
        t.implicit_zeros = true;
        t.insert_insertions(0, &[Insertion { i: 1, k: 0 }; 3], int(1));
        let d = assemble_d(&t, 6, safe_eps_floor(6)).unwrap();
        assert_eq!(d.coefficient(&Monomial::from_exponents([(1, 3)], -2)), rat(1, 6));
        assert_eq!(d.coefficient(&Monomial::from_exponents([(1, 6)], -4)), rat(1, 72));
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn missing_entry_is_reported() {
        let mut t = CorrelatorTable::new(2, Caps { g_max: 0, weight_max: 3 });
        t.insert_insertions(0, &[Insertion { i: 1, k: 0 }; 3], int(1));
        match assemble_d(&t, 3, safe_eps_floor(3)) {
            Err(Error::MissingEntry { g: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn insertion_round_trip() {
        for h in 2..6 {
            for m in 1..40 {
                if m % h == 0 {
                    continue;
                }
                assert_eq!(Insertion::from_t_index(m, h).unwrap().t_index(h), m);
            }
        }
    }

    #[test]
    fn genus_term_eps_power() {
        let mut t = CorrelatorTable::new(2, Caps { g_max: 1, weight_max: 3 });
        t.implicit_zeros = true;
        t.insert_insertions(1, &[Insertion { i: 1, k: 1 }], rat(1, 24));
        let f = assemble_f(&t, 3, safe_eps_floor(3)).unwrap();
        // q_1 = 3 t_3
        assert_eq!(f.coefficient(&Monomial::from_exponents([(3, 1)], 0)), rat(1, 8));
    }
}
