//! Finite abelian groups in invariant-factor form.
//!
//! A group is stored as its invariant factors `n_1 | n_2 | ... | n_r`, each at
//! least 2. Elements are coordinate vectors with `coords[i] < n_i`; the
//! canonical element index is the mixed-radix value of the coordinates with
//! the last coordinate varying fastest, so index order is lexicographic order
//! on coordinates and index 0 is the identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest group order that may be enumerated into a [`GroupTable`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid factor {0}: cyclic factors must be at least 2")]
    InvalidFactor(u64),
    #[error("cannot parse group notation {0:?}")]
    Parse(String),
    #[error("group order overflows u64")]
    Overflow,
    #[error("element has {found} coordinates but the group has rank {expected}")]
    IncompatibleElement { expected: usize, found: usize },
    #[error("coordinate {value} is out of range for factor {factor}")]
    CoordinateOutOfRange { value: u64, factor: u64 },
    #[error("element index {index} is out of range for a group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: u64, cap: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    /// Builds the group `C_{f_1} ⊕ ... ⊕ C_{f_k}` and normalizes it to
    /// invariant-factor form. Coprime parts are merged, so `[2, 3]` and `[6]`
    /// give the same value.
    pub fn new(factors: &[u64]) -> Result<Self, GroupError> {
        let mut prime_powers: Vec<(u64, Vec<u64>)> = Vec::new();
        for &f in factors {
            if f < 2 {
                return Err(GroupError::InvalidFactor(f));
            }
            for (p, pk) in prime_power_decomposition(f) {
                match prime_powers.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, powers)) => powers.push(pk),
                    None => prime_powers.push((p, vec![pk])),
                }
            }
        }
        let rank = prime_powers.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        for (_, powers) in prime_powers.iter_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
        }
        // The j-th largest invariant factor collects the j-th largest power of
        // every prime.
        let mut normalized = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut n: u64 = 1;
            for (_, powers) in &prime_powers {
                if let Some(&pk) = powers.get(j) {
                    n = n.checked_mul(pk).ok_or(GroupError::Overflow)?;
                }
            }
            normalized.push(n);
        }
        normalized.reverse();
        let group = AbelianGroup { factors: normalized };
        group.checked_order()?;
        Ok(group)
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(&[n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    fn checked_order(&self) -> Result<u64, GroupError> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &f| acc.checked_mul(f))
            .ok_or(GroupError::Overflow)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Returns `Some(p)` when every invariant factor is a power of the prime `p`.
    /// The trivial group is a p-group for every p and yields `None`.
    pub fn p_group_prime(&self) -> Option<u64> {
        let primes = prime_power_decomposition(self.exponent());
        match primes.as_slice() {
            [(p, _)] => Some(*p),
            _ => None,
        }
    }

    pub fn is_p_group_for(&self, p: u64) -> bool {
        self.is_trivial() || self.p_group_prime() == Some(p)
    }

    /// Checked construction of an element from coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<Element, GroupError> {
        self.check_rank(coords.len())?;
        for (&c, &n) in coords.iter().zip(&self.factors) {
            if c >= n {
                return Err(GroupError::CoordinateOutOfRange { value: c, factor: n });
            }
        }
        Ok(Element(coords.to_vec()))
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    fn check_rank(&self, found: usize) -> Result<(), GroupError> {
        if found != self.rank() {
            return Err(GroupError::IncompatibleElement {
                expected: self.rank(),
                found,
            });
        }
        Ok(())
    }

    pub fn add(&self, g: &Element, h: &Element) -> Result<Element, GroupError> {
        self.check_rank(g.0.len())?;
        self.check_rank(h.0.len())?;
        Ok(Element(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.factors)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        ))
    }

    pub fn negate(&self, g: &Element) -> Result<Element, GroupError> {
        self.check_rank(g.0.len())?;
        Ok(Element(
            g.0.iter()
                .zip(&self.factors)
                .map(|(a, n)| (n - a) % n)
                .collect(),
        ))
    }

    /// Canonical index of an element (lexicographic by coordinates).
    pub fn index_of(&self, g: &Element) -> Result<u64, GroupError> {
        self.check_rank(g.0.len())?;
        let mut idx = 0u64;
        for (&c, &n) in g.0.iter().zip(&self.factors) {
            if c >= n {
                return Err(GroupError::CoordinateOutOfRange { value: c, factor: n });
            }
            idx = idx * n + c;
        }
        Ok(idx)
    }

    pub fn element_at(&self, index: u64) -> Result<Element, GroupError> {
        let order = self.order();
        if index >= order {
            return Err(GroupError::IndexOutOfRange { index, order });
        }
        let mut coords = vec![0; self.rank()];
        let mut rest = index;
        for (c, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *c = rest % n;
            rest /= n;
        }
        Ok(Element(coords))
    }

    /// All elements in canonical order.
    pub fn elements(&self, cap: u64) -> Result<Vec<Element>, GroupError> {
        let order = self.checked_order()?;
        if order > cap {
            return Err(GroupError::TooLarge { order, cap });
        }
        (0..order).map(|i| self.element_at(i)).collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for AbelianGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "trivial" {
            return Ok(Self::trivial());
        }
        let factors = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| GroupError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&factors)
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Cayley table over canonical element indices. Everything that iterates
/// over group elements works through this.
#[derive(Clone, Debug)]
pub struct GroupTable {
    group: AbelianGroup,
    order: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl GroupTable {
    pub fn new(group: &AbelianGroup) -> Result<Self, GroupError> {
        Self::with_cap(group, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(group: &AbelianGroup, cap: u64) -> Result<Self, GroupError> {
        let elements = group.elements(cap)?;
        let order = elements.len();
        let factors = group.factors();
        let index = |coords: &mut dyn Iterator<Item = u64>| -> u32 {
            coords.zip(factors).fold(0u64, |acc, (c, &n)| acc * n + c) as u32
        };
        let mut add = vec![0u32; order * order];
        for (i, g) in elements.iter().enumerate() {
            for (j, h) in elements.iter().enumerate().skip(i) {
                let mut sum = g.0.iter().zip(&h.0).zip(factors).map(|((a, b), n)| (a + b) % n);
                let s = index(&mut sum);
                add[i * order + j] = s;
                add[j * order + i] = s;
            }
        }
        let neg = elements
            .iter()
            .map(|g| index(&mut g.0.iter().zip(factors).map(|(a, n)| (n - a) % n)))
            .collect();
        Ok(GroupTable {
            group: group.clone(),
            order,
            add,
            neg,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn sum<I: IntoIterator<Item = u32>>(&self, items: I) -> u32 {
        items.into_iter().fold(0, |acc, g| self.add(acc, g))
    }

    /// `k * g` by repeated addition.
    pub fn mul(&self, k: u64, g: u32) -> u32 {
        let k = k % self.group.exponent().max(1);
        (0..k).fold(0, |acc, _| self.add(acc, g))
    }

    pub fn element_order(&self, g: u32) -> u64 {
        let mut acc = g;
        let mut k = 1;
        while acc != 0 {
            acc = self.add(acc, g);
            k += 1;
        }
        k
    }
}

/// Prime-power factorization `[(p, p^e)]` by trial division.
pub(crate) fn prime_power_decomposition(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut pk = 1;
            while n % p == 0 {
                n /= p;
                pk *= p;
            }
            out.push((p, pk));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    #[test]
    fn normalizes_to_invariant_factors() {
        let c33 = g(&[3, 3]);
        assert_eq!(c33.factors(), &[3, 3]);
        assert_eq!((c33.exponent(), c33.order()), (3, 9));

        let c6 = g(&[2, 3]);
        assert_eq!(c6.factors(), &[6]);
        assert_eq!(c6, g(&[6]));
        assert_eq!((c6.exponent(), c6.order()), (6, 6));

        let c24 = g(&[4, 2]);
        assert_eq!(c24.factors(), &[2, 4]);
        assert_eq!((c24.exponent(), c24.order()), (4, 8));

        assert_eq!(g(&[2, 4, 3]).factors(), &[2, 12]);
        assert_eq!(g(&[6, 10]).factors(), &[2, 30]);
        assert_eq!(g(&[4, 6, 9]).factors(), &[6, 36]);
    }

    #[test]
    fn trivial_group() {
        let t = g(&[]);
        assert_eq!((t.order(), t.exponent(), t.rank()), (1, 1, 0));
        assert_eq!(t.elements(10).unwrap(), vec![t.zero()]);
        assert_eq!("trivial".parse::<AbelianGroup>().unwrap(), t);
        assert_eq!(t.to_string(), "trivial");
    }

    #[test]
    fn rejects_small_factors() {
        assert_eq!(AbelianGroup::new(&[0, 4]), Err(GroupError::InvalidFactor(0)));
        assert_eq!(AbelianGroup::new(&[1]), Err(GroupError::InvalidFactor(1)));
        assert!("0,4".parse::<AbelianGroup>().is_err());
        assert!("2,x".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn notation_round_trips_through_normalization() {
        let a: AbelianGroup = "2,3".parse().unwrap();
        let b: AbelianGroup = "6".parse().unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!("4, 2".parse::<AbelianGroup>().unwrap().to_string(), "2,4");
    }

    #[test]
    fn element_arithmetic() {
        let grp = g(&[2, 4]);
        let a = grp.element(&[1, 3]).unwrap();
        let b = grp.element(&[1, 2]).unwrap();
        assert_eq!(grp.add(&a, &b).unwrap().coords(), &[0, 1]);
        assert_eq!(grp.negate(&a).unwrap().coords(), &[1, 1]);
        assert!(grp.zero().is_zero());
        assert!(!a.is_zero());
        let other = g(&[5]).element(&[1]).unwrap();
        assert!(matches!(
            grp.add(&a, &other),
            Err(GroupError::IncompatibleElement { .. })
        ));
        assert!(grp.element(&[2, 0]).is_err());
    }

    #[test]
    fn enumeration_order() {
        let c3 = g(&[3]);
        let e: Vec<_> = c3.elements(100).unwrap().iter().map(|x| x.coords().to_vec()).collect();
        assert_eq!(e, vec![vec![0], vec![1], vec![2]]);
        let c22 = g(&[2, 2]);
        let e: Vec<_> = c22.elements(100).unwrap().iter().map(|x| x.coords().to_vec()).collect();
        assert_eq!(e, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(matches!(
            g(&[64, 64]).elements(1000),
            Err(GroupError::TooLarge { order: 4096, cap: 1000 })
        ));
    }

    #[test]
    fn table_matches_coordinate_arithmetic() {
        for f in [&[2u64, 4][..], &[3, 3], &[6], &[2, 2, 2]] {
            let grp = g(f);
            let t = GroupTable::new(&grp).unwrap();
            let els = grp.elements(100).unwrap();
            for (i, x) in els.iter().enumerate() {
                assert_eq!(grp.index_of(x).unwrap(), i as u64);
                assert_eq!(t.add(i as u32, t.neg(i as u32)), 0);
                for (j, y) in els.iter().enumerate() {
                    let s = grp.index_of(&grp.add(x, y).unwrap()).unwrap();
                    assert_eq!(t.add(i as u32, j as u32) as u64, s);
                }
            }
        }
    }

    #[test]
    fn p_group_detection() {
        assert_eq!(g(&[2, 4]).p_group_prime(), Some(2));
        assert_eq!(g(&[3, 9]).p_group_prime(), Some(3));
        assert_eq!(g(&[6]).p_group_prime(), None);
        assert_eq!(g(&[]).p_group_prime(), None);
        assert!(g(&[]).is_p_group_for(5));
    }
}
