//! Sequences (multisets) over a group and the exact set of lengths of their
//! nonempty zero-sum subsequences.
//!
//! The dynamic program keeps, for every group element `h`, the set of lengths
//! `t` such that some sub-multiset of length `t` sums to `h`. Adding one item
//! `g` maps that table to `new[h] = old[h] | (old[h - g] << 1)`. Row 0 with
//! bit 0 removed is the zero-sum length set.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::automorphism::Permutation;
use crate::group::{AbelianGroup, Element, GroupError, GroupTable};
use crate::spec::{intersects, or_shifted, test_bit, words_for, LengthSpec, SpecError};

/// Longest sequence accepted by [`length_set`] unless a cap is passed.
pub const DEFAULT_DP_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence of length {len} exceeds the length cap {cap}")]
    LengthCap { len: usize, cap: usize },
    #[error("sequence over {found} used with a table for {expected}")]
    GroupMismatch { expected: String, found: String },
    #[error("malformed sequence record {0:?}")]
    BadRecord(Vec<u64>),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// A multiset of group elements, keyed by canonical element index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    group: AbelianGroup,
    counts: BTreeMap<u32, u32>,
    len: usize,
}

impl Sequence {
    pub fn empty(group: &AbelianGroup) -> Self {
        Sequence {
            group: group.clone(),
            counts: BTreeMap::new(),
            len: 0,
        }
    }

    pub fn from_indices<I>(group: &AbelianGroup, indices: I) -> Result<Self, SequenceError>
    where
        I: IntoIterator<Item = u32>,
    {
        let order = group.order();
        let mut seq = Sequence::empty(group);
        for idx in indices {
            if idx as u64 >= order {
                return Err(GroupError::IndexOutOfRange {
                    index: idx as u64,
                    order,
                }
                .into());
            }
            *seq.counts.entry(idx).or_insert(0) += 1;
            seq.len += 1;
        }
        Ok(seq)
    }

    pub fn from_elements(group: &AbelianGroup, elements: &[Element]) -> Result<Self, SequenceError> {
        let indices = elements
            .iter()
            .map(|e| group.index_of(e).map(|i| i as u32))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_indices(group, indices)
    }

    /// Parses `[coords..., count]` records.
    pub fn from_records(group: &AbelianGroup, records: &[Vec<u64>]) -> Result<Self, SequenceError> {
        let rank = group.rank();
        let mut seq = Sequence::empty(group);
        for rec in records {
            if rec.len() != rank + 1 || rec[rank] == 0 {
                return Err(SequenceError::BadRecord(rec.clone()));
            }
            let idx = group.index_of(&group.element(&rec[..rank])?)? as u32;
            let count = u32::try_from(rec[rank]).map_err(|_| SequenceError::BadRecord(rec.clone()))?;
            *seq.counts.entry(idx).or_insert(0) += count;
            seq.len += count as usize;
        }
        Ok(seq)
    }

    /// `[coords..., count]` records in canonical element order.
    pub fn to_records(&self) -> Vec<Vec<u64>> {
        self.counts
            .iter()
            .map(|(&idx, &c)| {
                let mut rec = self
                    .group
                    .element_at(idx as u64)
                    .expect("index validated on construction")
                    .coords()
                    .to_vec();
                rec.push(c as u64);
                rec
            })
            .collect()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn multiplicity(&self, idx: u32) -> u32 {
        self.counts.get(&idx).copied().unwrap_or(0)
    }

    /// `(index, count)` pairs in canonical order.
    pub fn distinct(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i, c))
    }

    /// Sorted element indices, repeated by multiplicity.
    pub fn indices(&self) -> Vec<u32> {
        self.distinct()
            .flat_map(|(i, c)| std::iter::repeat(i).take(c as usize))
            .collect()
    }

    pub fn elements(&self) -> Vec<Element> {
        self.indices()
            .into_iter()
            .map(|i| self.group.element_at(i as u64).expect("validated index"))
            .collect()
    }

    pub fn is_sub_multiset_of(&self, other: &Sequence) -> bool {
        self.group == other.group && self.distinct().all(|(i, c)| other.multiplicity(i) >= c)
    }

    pub fn sum(&self, table: &GroupTable) -> u32 {
        self.distinct()
            .fold(0, |acc, (i, c)| table.add(acc, table.mul(c as u64, i)))
    }

    /// Image under an element permutation (normally an automorphism).
    pub fn map(&self, perm: &Permutation) -> Sequence {
        let mut out = Sequence::empty(&self.group);
        for (i, c) in self.distinct() {
            *out.counts.entry(perm.apply(i)).or_insert(0) += c;
        }
        out.len = self.len;
        out
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .distinct()
            .map(|(i, c)| {
                let e = self.group.element_at(i as u64).expect("validated index");
                if c == 1 {
                    e.to_string()
                } else {
                    format!("{e}^{c}")
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Lengths `t >= 1` for which a zero-sum subsequence of length exactly `t`
/// exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthSet {
    bits: Vec<u64>,
    max_length: usize,
}

impl LengthSet {
    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn contains(&self, t: usize) -> bool {
        t >= 1 && t <= self.max_length && test_bit(&self.bits, t)
    }

    pub fn lengths(&self) -> Vec<usize> {
        (1..=self.max_length).filter(|&t| self.contains(t)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths().is_empty()
    }

    pub fn is_subset_of(&self, other: &LengthSet) -> bool {
        self.lengths().into_iter().all(|t| other.contains(t))
    }

    pub fn meets(&self, spec: &LengthSpec, n: u64) -> Result<bool, SpecError> {
        let mask = spec.mask(n, self.max_length)?;
        Ok(intersects(&self.bits, &mask))
    }
}

/// Per-element length bitsets: row `h` holds lengths of sub-multisets summing
/// to `h`.
#[derive(Clone, Debug)]
pub(crate) struct SumTable {
    words: usize,
    data: Vec<u64>,
}

impl SumTable {
    pub(crate) fn empty(order: usize, max_len: usize) -> Self {
        let words = words_for(max_len);
        let mut data = vec![0u64; order * words];
        data[0] = 1;
        SumTable { words, data }
    }

    #[inline]
    pub(crate) fn row(&self, h: u32) -> &[u64] {
        let w = self.words;
        &self.data[h as usize * w..(h as usize + 1) * w]
    }

    pub(crate) fn extended(&self, g: u32, table: &GroupTable) -> SumTable {
        let mut out = SumTable {
            words: self.words,
            data: vec![0; self.data.len()],
        };
        extend_rows(&self.data, &mut out.data, self.words, g, table);
        out
    }
}

/// Writes the table for `S·g` into `out` given the table for `S` in `prev`.
/// Returns the number of nonzero elements that are sums of a nonempty
/// sub-multiset.
#[inline]
pub(crate) fn extend_rows(prev: &[u64], out: &mut [u64], words: usize, g: u32, table: &GroupTable) -> usize {
    let order = table.order();
    let mut reachable = 0;
    for h in 0..order {
        let src = table.sub(h as u32, g) as usize;
        let dst = &mut out[h * words..(h + 1) * words];
        dst.copy_from_slice(&prev[h * words..(h + 1) * words]);
        or_shifted(dst, &prev[src * words..(src + 1) * words]);
        if h != 0 && dst.iter().any(|&w| w != 0) {
            reachable += 1;
        }
    }
    reachable
}

fn check_group(table: &GroupTable, s: &Sequence) -> Result<(), SequenceError> {
    if table.group() != s.group() {
        return Err(SequenceError::GroupMismatch {
            expected: table.group().to_string(),
            found: s.group().to_string(),
        });
    }
    Ok(())
}

fn build_table(table: &GroupTable, s: &Sequence, cap: usize) -> Result<SumTable, SequenceError> {
    check_group(table, s)?;
    if s.len() > cap {
        return Err(SequenceError::LengthCap { len: s.len(), cap });
    }
    let mut dp = SumTable::empty(table.order(), s.len());
    for g in s.indices() {
        dp = dp.extended(g, table);
    }
    Ok(dp)
}

/// Exact set of zero-sum subsequence lengths, with the default length cap.
pub fn length_set(table: &GroupTable, s: &Sequence) -> Result<LengthSet, SequenceError> {
    length_set_capped(table, s, DEFAULT_DP_CAP)
}

pub fn length_set_capped(table: &GroupTable, s: &Sequence, cap: usize) -> Result<LengthSet, SequenceError> {
    let dp = build_table(table, s, cap)?;
    let mut bits = dp.row(0).to_vec();
    bits[0] &= !1;
    Ok(LengthSet {
        bits,
        max_length: s.len(),
    })
}

pub fn has_zero_sum_in(table: &GroupTable, s: &Sequence, spec: &LengthSpec) -> Result<bool, SequenceError> {
    let n = table.group().exponent();
    spec.validate(n)?;
    Ok(length_set(table, s)?.meets(spec, n)?)
}

/// A zero-sum subsequence with admissible length: the shortest admissible
/// length first, then the lexicographically least sorted index vector.
pub fn extract_witness(
    table: &GroupTable,
    s: &Sequence,
    spec: &LengthSpec,
) -> Result<Option<Sequence>, SequenceError> {
    let n = table.group().exponent();
    spec.validate(n)?;
    check_group(table, s)?;
    if s.len() > DEFAULT_DP_CAP {
        return Err(SequenceError::LengthCap {
            len: s.len(),
            cap: DEFAULT_DP_CAP,
        });
    }
    let distinct: Vec<(u32, u32)> = s.distinct().collect();
    // suffix[k] covers the items distinct[k..]
    let mut suffix = vec![SumTable::empty(table.order(), s.len())];
    for &(g, c) in distinct.iter().rev() {
        let mut t = suffix.last().expect("nonempty").clone();
        for _ in 0..c {
            t = t.extended(g, table);
        }
        suffix.push(t);
    }
    suffix.reverse();

    let full = suffix[0].row(0);
    let Some(target_len) =
        (1..=s.len()).find(|&t| test_bit(full, t) && spec.contains_unchecked(t as u64, n))
    else {
        return Ok(None);
    };

    let mut picked = Vec::with_capacity(target_len);
    let mut target = 0u32;
    let mut remaining = target_len;
    for (k, &(g, c)) in distinct.iter().enumerate() {
        let take = (0..=c.min(remaining as u32))
            .rev()
            .find(|&x| {
                let rest = table.sub(target, table.mul(x as u64, g));
                test_bit(suffix[k + 1].row(rest), remaining - x as usize)
            })
            .expect("suffix table guarantees a completion");
        picked.extend(std::iter::repeat(g).take(take as usize));
        target = table.sub(target, table.mul(take as u64, g));
        remaining -= take as usize;
    }
    debug_assert_eq!(remaining, 0);
    Ok(Some(Sequence::from_indices(s.group(), picked)?))
}

/// Checks a witness contract: sub-multiset, zero sum, admissible length.
pub fn is_valid_witness(table: &GroupTable, parent: &Sequence, witness: &Sequence, spec: &LengthSpec) -> bool {
    let n = table.group().exponent();
    !witness.is_empty()
        && witness.is_sub_multiset_of(parent)
        && witness.sum(table) == 0
        && spec.contains(witness.len() as u64, n).unwrap_or(false)
}
