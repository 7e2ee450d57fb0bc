//! Admissible zero-sum lengths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("exact length must be at least 1, got {0}")]
    ExactZero(u32),
    #[error("range {0}..={1} must satisfy 1 <= a <= b")]
    BadRange(u32, u32),
    #[error("residue start {i} must lie in [1, {n}]")]
    ResidueOutOfRange { i: u32, n: u64 },
    #[error("length and exponent must be positive (t = {t}, n = {n})")]
    NonPositive { t: u64, n: u64 },
    #[error("cannot parse length spec {0:?}")]
    Parse(String),
}

/// The set `L` of admissible lengths, relative to the group exponent `n`.
///
/// | variant              | lengths                                   |
/// |----------------------|-------------------------------------------|
/// | `All`                | every `t >= 1`                            |
/// | `Exact(k)`           | `{k}`                                     |
/// | `Range(a, b)`        | `[a, b]`                                  |
/// | `Multiples`          | `n, 2n, 3n, ...`                          |
/// | `ResidueUpFrom(i)`   | `t >= 1` with `t mod n` in `{0} ∪ [i, n-1]` |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LengthSpec {
    All,
    Exact(u32),
    Range(u32, u32),
    Multiples,
    ResidueUpFrom(u32),
}

impl LengthSpec {
    pub fn validate(&self, n: u64) -> Result<(), SpecError> {
        match *self {
            LengthSpec::Exact(0) => Err(SpecError::ExactZero(0)),
            LengthSpec::Range(a, b) if a == 0 || a > b => Err(SpecError::BadRange(a, b)),
            LengthSpec::ResidueUpFrom(i) if i == 0 || i as u64 > n => {
                Err(SpecError::ResidueOutOfRange { i, n })
            }
            _ if n == 0 => Err(SpecError::NonPositive { t: 1, n }),
            _ => Ok(()),
        }
    }

    /// Membership of `t` in `L` for a group of exponent `n`.
    pub fn contains(&self, t: u64, n: u64) -> Result<bool, SpecError> {
        if t == 0 || n == 0 {
            return Err(SpecError::NonPositive { t, n });
        }
        self.validate(n)?;
        Ok(self.contains_unchecked(t, n))
    }

    pub(crate) fn contains_unchecked(&self, t: u64, n: u64) -> bool {
        match *self {
            LengthSpec::All => true,
            LengthSpec::Exact(k) => t == k as u64,
            LengthSpec::Range(a, b) => (a as u64..=b as u64).contains(&t),
            LengthSpec::Multiples => t % n == 0,
            LengthSpec::ResidueUpFrom(i) => {
                let r = t % n;
                r == 0 || r >= i as u64
            }
        }
    }

    /// Bit `t` set iff `t ∈ L`, for `t` in `[0, max_len]` (bit 0 is never set).
    pub(crate) fn mask(&self, n: u64, max_len: usize) -> Result<Vec<u64>, SpecError> {
        self.validate(n)?;
        let mut bits = vec![0u64; words_for(max_len)];
        for t in 1..=max_len {
            if self.contains_unchecked(t as u64, n) {
                set_bit(&mut bits, t);
            }
        }
        Ok(bits)
    }
}

impl fmt::Display for LengthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthSpec::All => write!(f, "all"),
            LengthSpec::Exact(k) => write!(f, "exact:{k}"),
            LengthSpec::Range(a, b) => write!(f, "range:{a},{b}"),
            LengthSpec::Multiples => write!(f, "multiples"),
            LengthSpec::ResidueUpFrom(i) => write!(f, "resup:{i}"),
        }
    }
}

impl FromStr for LengthSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SpecError::Parse(s.to_string());
        let num = |x: &str| x.trim().parse::<u32>().map_err(|_| err());
        let (tag, arg) = match s.trim().split_once(':') {
            Some((t, a)) => (t, Some(a)),
            None => (s.trim(), None),
        };
        let spec = match (tag, arg) {
            ("all", None) => LengthSpec::All,
            ("multiples", None) => LengthSpec::Multiples,
            ("exact", Some(k)) => LengthSpec::Exact(num(k)?),
            ("resup", Some(i)) => LengthSpec::ResidueUpFrom(num(i)?),
            ("range", Some(ab)) => {
                let (a, b) = ab.split_once(',').ok_or_else(err)?;
                LengthSpec::Range(num(a)?, num(b)?)
            }
            _ => return Err(err()),
        };
        match spec {
            LengthSpec::Exact(0) => Err(SpecError::ExactZero(0)),
            LengthSpec::Range(a, b) if a == 0 || a > b => Err(SpecError::BadRange(a, b)),
            LengthSpec::ResidueUpFrom(0) => Err(SpecError::ResidueOutOfRange { i: 0, n: 0 }),
            _ => Ok(spec),
        }
    }
}

impl Serialize for LengthSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LengthSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[inline]
pub(crate) fn words_for(max_bit: usize) -> usize {
    max_bit / 64 + 1
}

#[inline]
pub(crate) fn set_bit(bits: &mut [u64], t: usize) {
    bits[t / 64] |= 1 << (t % 64);
}

#[inline]
pub(crate) fn test_bit(bits: &[u64], t: usize) -> bool {
    bits.get(t / 64).is_some_and(|w| w >> (t % 64) & 1 == 1)
}

#[inline]
pub(crate) fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// `dst |= src << 1` across words; bits shifted past the end are dropped.
#[inline]
pub(crate) fn or_shifted(dst: &mut [u64], src: &[u64]) {
    let mut carry = 0u64;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d |= (s << 1) | carry;
        carry = s >> 63;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(!LengthSpec::ResidueUpFrom(2).contains(5, 4).unwrap());
        assert!(LengthSpec::ResidueUpFrom(2).contains(8, 4).unwrap());
        assert!(LengthSpec::ResidueUpFrom(2).contains(6, 4).unwrap());
        assert!(LengthSpec::Multiples.contains(6, 3).unwrap());
        assert!(!LengthSpec::Multiples.contains(7, 3).unwrap());
        assert!(LengthSpec::Range(2, 4).contains(4, 9).unwrap());
        assert!(!LengthSpec::Exact(3).contains(6, 3).unwrap());
    }

    #[test]
    fn residue_endpoints() {
        // i = 1 admits everything, i = n only multiples
        for t in 1..40 {
            assert!(LengthSpec::ResidueUpFrom(1).contains(t, 7).unwrap());
            assert_eq!(
                LengthSpec::ResidueUpFrom(7).contains(t, 7).unwrap(),
                LengthSpec::Multiples.contains(t, 7).unwrap()
            );
        }
    }

    #[test]
    fn malformed_specs() {
        assert!(LengthSpec::ResidueUpFrom(5).contains(3, 4).is_err());
        assert!(LengthSpec::ResidueUpFrom(0).contains(3, 4).is_err());
        assert!(LengthSpec::Range(3, 2).contains(3, 4).is_err());
        assert!(LengthSpec::Exact(0).contains(3, 4).is_err());
        assert!(LengthSpec::All.contains(0, 4).is_err());
    }

    #[test]
    fn string_forms() {
        for s in ["all", "exact:5", "range:2,9", "multiples", "resup:3"] {
            let spec: LengthSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        for bad in ["", "exact", "exact:0", "range:3", "range:4,2", "resup:x", "all:1"] {
            assert!(bad.parse::<LengthSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn shifted_or_crosses_words() {
        let mut dst = vec![0u64; 2];
        or_shifted(&mut dst, &[1 << 63, 1]);
        assert_eq!(dst, vec![0, 0b11]);
    }
}
