use std::fmt;

/// A monomial `t_{n_1}^{a_1} ... t_{n_r}^{a_r} eps^e`.
///
/// `vars` is sorted by variable index with every exponent >= 1, so the
/// derived ordering is lexicographic on (variable, exponent) and then eps.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    vars: Vec<(u32, u32)>,
    eps: i32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(n: u32) -> Self {
        Self::from_exponents([(n, 1)], 0)
    }

    pub fn eps(e: i32) -> Self {
        Self { vars: Vec::new(), eps: e }
    }

    /// Builds a monomial from (variable, exponent) pairs; repeated variables
    /// are merged and zero exponents dropped.
    pub fn from_exponents(pairs: impl IntoIterator<Item = (u32, u32)>, eps: i32) -> Self {
        let mut vars: Vec<(u32, u32)> = Vec::new();
        for (n, a) in pairs {
            assert!(n >= 1, "variables are t_n with n >= 1");
            if a == 0 {
                continue;
            }
            match vars.binary_search_by_key(&n, |&(v, _)| v) {
                Ok(pos) => vars[pos].1 += a,
                Err(pos) => vars.insert(pos, (n, a)),
            }
        }
        Self { vars, eps }
    }

    /// Monomial from a multiset of variable indices.
    pub fn from_indices(indices: &[u32], eps: i32) -> Self {
        Self::from_exponents(indices.iter().map(|&n| (n, 1)), eps)
    }

    pub fn vars(&self) -> &[(u32, u32)] {
        &self.vars
    }

    pub fn eps_power(&self) -> i32 {
        self.eps
    }

    pub fn with_eps(&self, eps: i32) -> Self {
        Self { vars: self.vars.clone(), eps }
    }

    pub fn exponent(&self, n: u32) -> u32 {
        self.vars
            .binary_search_by_key(&n, |&(v, _)| v)
            .map(|pos| self.vars[pos].1)
            .unwrap_or(0)
    }

    /// Total t-weight `sum n * a_n`.
    pub fn weight(&self) -> u32 {
        self.vars.iter().map(|&(n, a)| n * a).sum()
    }

    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|&(_, a)| a).sum()
    }

    pub fn is_t_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Multiset of variable indices, ascending.
    pub fn indices(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for &(n, a) in &self.vars {
            out.extend(std::iter::repeat_n(n, a as usize));
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            let (a, b) = (self.vars[i], other.vars[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    vars.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    vars.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { vars, eps: self.eps + other.eps }
    }

    /// Changes the exponent of `t_n` by `delta`; `None` if it would go negative.
    pub fn shift_exponent(&self, n: u32, delta: i64) -> Option<Monomial> {
        let cur = self.exponent(n) as i64 + delta;
        if cur < 0 {
            return None;
        }
        let mut vars: Vec<(u32, u32)> = self.vars.iter().copied().filter(|&(v, _)| v != n).collect();
        if cur > 0 {
            let pos = vars.partition_point(|&(v, _)| v < n);
            vars.insert(pos, (n, cur as u32));
        }
        Some(Monomial { vars, eps: self.eps })
    }

    /// `self / other` when `other` divides `self` in the t-variables; eps subtracts.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.clone();
        for &(n, a) in &other.vars {
            out = out.shift_exponent(n, -(a as i64))?;
        }
        out.eps -= other.eps;
        Some(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .vars
            .iter()
            .map(|&(n, a)| if a == 1 { format!("t_{n}") } else { format!("t_{n}^{a}") })
            .collect();
        if self.eps != 0 {
            parts.push(format!("eps^{}", self.eps));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_and_weight() {
        let m = Monomial::from_exponents([(3, 1), (1, 2), (3, 1)], -2);
        assert_eq!(m.vars(), &[(1, 2), (3, 2)]);
        assert_eq!(m.weight(), 8);
        assert_eq!(m.to_string(), "t_1^2 t_3^2 eps^-2");
    }

    #[test]
    fn divide_and_shift() {
        let m = Monomial::from_indices(&[1, 1, 5], 0);
        let d = m.divide(&Monomial::var(1)).unwrap();
        assert_eq!(d, Monomial::from_indices(&[1, 5], 0));
        assert!(m.divide(&Monomial::var(2)).is_none());
        assert_eq!(m.shift_exponent(5, -1).unwrap(), Monomial::from_indices(&[1, 1], 0));
    }
}
