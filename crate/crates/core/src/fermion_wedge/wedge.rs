//! Semi-infinite wedge states `zeta^{i_0} ^ zeta^{i_1} ^ ...`, `i_0 > i_1 > ...`,
//! with `i_s = m - s - 1` for large `s`. The charge-`m` vacuum occupies every
//! slot `<= m - 1`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exact_series::{int, Rational};

/// A basis vector: charge plus the partition `lambda_s = i_s - (m - s - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeState {
    pub charge: i64,
    /// Weakly decreasing positive parts.
    pub partition: Vec<u32>,
}

impl WedgeState {
    pub fn vacuum(charge: i64) -> Self {
        Self { charge, partition: Vec::new() }
    }

    pub fn energy(&self) -> u32 {
        self.partition.iter().sum()
    }

    /// The top `depth` occupied slots, decreasing; every slot below the last
    /// one listed is occupied when `depth >= partition.len()`.
    pub fn slots(&self, depth: usize) -> Vec<i64> {
        (0..depth)
            .map(|s| self.charge - s as i64 - 1 + *self.partition.get(s).unwrap_or(&0) as i64)
            .collect()
    }

    fn from_slots(charge: i64, slots: &[i64]) -> Self {
        let mut partition: Vec<u32> = slots
            .iter()
            .enumerate()
            .map(|(s, &i)| {
                let p = i - (charge - s as i64 - 1);
                debug_assert!(p >= 0);
                p as u32
            })
            .collect();
        while partition.last() == Some(&0) {
            partition.pop();
        }
        Self { charge, partition }
    }

    /// Number of explicit slots needed so that everything at or below `i`
    /// (and the slot `i` itself) is represented.
    fn depth_covering(&self, i: i64) -> usize {
        let base = self.partition.len() as i64;
        // slot index s with m - s - 1 < i for s >= depth
        let need = (self.charge - i).max(0) + 1;
        (base.max(need) + 1) as usize
    }

    pub fn is_occupied(&self, i: i64) -> bool {
        let d = self.depth_covering(i);
        self.slots(d).contains(&i)
    }

    /// Wedge by `zeta^i` on the left: `psi_{-i+1/2}`.
    pub fn wedge(&self, i: i64) -> Option<(WedgeState, i64)> {
        let d = self.depth_covering(i);
        let slots = self.slots(d);
        if slots.contains(&i) {
            return None;
        }
        let pos = slots.iter().take_while(|&&x| x > i).count();
        let mut out = slots.clone();
        out.insert(pos, i);
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((Self::from_slots(self.charge + 1, &out), sign))
    }

    /// Contraction removing `zeta^i`: `psi*_{i-1/2}`.
    pub fn contract(&self, i: i64) -> Option<(WedgeState, i64)> {
        let d = self.depth_covering(i);
        let slots = self.slots(d);
        let pos = slots.iter().position(|&x| x == i)?;
        let mut out = slots.clone();
        out.remove(pos);
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((Self::from_slots(self.charge - 1, &out), sign))
    }

    /// Lowest slot that is not occupied.
    pub fn lowest_hole(&self) -> i64 {
        let slots = self.slots(self.partition.len() + 1);
        let mut expect = *slots.last().unwrap();
        for &x in slots.iter().rev() {
            if x != expect {
                return expect;
            }
            expect += 1;
        }
        expect
    }

    /// Highest occupied slot.
    pub fn top(&self) -> i64 {
        self.slots(1)[0]
    }
}

/// Every partition of `n` into parts, weakly decreasing.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All states with `|charge| <= max_charge` and energy `<= max_energy`.
pub fn states(max_charge: i64, max_energy: u32) -> Vec<WedgeState> {
    let mut out = Vec::new();
    for m in -max_charge..=max_charge {
        for e in 0..=max_energy {
            for p in partitions(e) {
                out.push(WedgeState { charge: m, partition: p });
            }
        }
    }
    out
}

/// Finite linear combination of wedge states.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<WedgeState, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(s: WedgeState) -> Self {
        let mut v = Self::zero();
        v.add(s, int(1));
        v
    }

    pub fn add(&mut self, s: WedgeState, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add_vector(&mut self, other: &FockVector, scale: &Rational) {
        for (s, c) in &other.terms {
            self.add(s.clone(), c * scale);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WedgeState, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &WedgeState) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies a map on basis states linearly.
    pub fn map(&self, f: impl Fn(&WedgeState) -> FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in &self.terms {
            out.add_vector(&f(s), c);
        }
        out
    }
}

/// `2r` for a half-integer mode index `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn new(twice: i64) -> Self {
        assert!(twice % 2 != 0, "mode index must be a half-integer");
        Self(twice)
    }
}

/// `psi_r`, `r = -i + 1/2`: wedges slot `i = 1/2 - r`.
pub fn psi_apply(r: HalfInt, s: &WedgeState) -> Option<(WedgeState, i64)> {
    s.wedge((1 - r.0) / 2)
}

/// `psi*_r`, `r = j - 1/2`: contracts slot `j = r + 1/2`.
pub fn psi_star_apply(r: HalfInt, s: &WedgeState) -> Option<(WedgeState, i64)> {
    s.contract((r.0 + 1) / 2)
}

/// Normal-ordered `rhat(E_ij)`: `psi_{-i+1/2} psi*_{j-1/2}` for `j > 0` and
/// `-psi*_{j-1/2} psi_{-i+1/2}` for `j <= 0`.
pub fn rhat_apply(i: i64, j: i64, s: &WedgeState) -> Option<(WedgeState, i64)> {
    if j > 0 {
        let (a, sa) = s.contract(j)?;
        let (b, sb) = a.wedge(i)?;
        Some((b, sa * sb))
    } else {
        let (a, sa) = s.wedge(i)?;
        let (b, sb) = a.contract(j)?;
        Some((b, -sa * sb))
    }
}

pub fn as_vector(r: Option<(WedgeState, i64)>) -> FockVector {
    match r {
        Some((s, sign)) => FockVector::basis_signed(s, sign),
        None => FockVector::zero(),
    }
}

impl FockVector {
    pub fn basis_signed(s: WedgeState, sign: i64) -> Self {
        let mut v = Self::zero();
        v.add(s, int(sign));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_on_occupied_is_zero() {
        let v = WedgeState::vacuum(0);
        assert!(v.wedge(-1).is_none());
        assert!(v.wedge(-5).is_none());
    }

    #[test]
    fn wedge_top_slot_raises_charge() {
        for m in -3..=3 {
            let (s, sign) = WedgeState::vacuum(m).wedge(m).unwrap();
            assert_eq!(s, WedgeState::vacuum(m + 1));
            assert_eq!(sign, 1);
        }
    }

    #[test]
    fn wedge_then_contract_round_trip() {
        for st in states(2, 5) {
            for i in -8..8 {
                if let Some((w, s1)) = st.wedge(i) {
                    let (back, s2) = w.contract(i).unwrap();
                    assert_eq!(back, st);
                    assert_eq!(s1 * s2, 1);
                }
            }
        }
    }

    #[test]
    fn slots_stabilize() {
        let s = WedgeState { charge: 1, partition: vec![3, 1] };
        assert_eq!(s.slots(4), vec![3, 0, -2, -3]);
        assert_eq!(s.lowest_hole(), -1);
        assert_eq!(s.top(), 3);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn normal_order_on_vacua() {
        // charge 1 vacuum (slots <= 0 filled) is annihilated by every rhat(E_ii)
        for i in -6..=6 {
            assert!(rhat_apply(i, i, &WedgeState::vacuum(1)).is_none());
        }
        // charge 0 vacuum: only E_00 acts, by -1
        for i in -6..=6 {
            let r = rhat_apply(i, i, &WedgeState::vacuum(0));
            if i == 0 {
                assert_eq!(r, Some((WedgeState::vacuum(0), -1)));
            } else {
                assert!(r.is_none());
            }
        }
    }
}
