//! Enumeration of multisets over a group, optionally restricted to zero-sum
//! sequences and to one representative per automorphism orbit.
//!
//! Multisets are sorted index vectors and come out in lexicographic order.
//! The orbit representative is the lexicographically least sorted vector in
//! the orbit; this needs the full automorphism list, so orbit reduction is
//! switched off when that list is too large to materialize.

use thiserror::Error;

use crate::automorphism::{
    automorphism_generators, automorphism_group, Permutation, DEFAULT_CLOSURE_CAP, DEFAULT_SYMMETRY_CAP,
};
use crate::group::{AbelianGroup, GroupError, GroupTable};
use crate::sequence::Sequence;

/// Largest number of candidate multisets an enumeration may walk.
pub const DEFAULT_SEQUENCE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("enumeration needs up to {needed} multisets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of multisets walked to enumerate length-`length` multisets over a
/// group of the given order. For zero-sum enumeration the last element is
/// forced, so only `length - 1` free positions are walked.
pub fn multiset_count(order: usize, length: usize, zero_sum_only: bool) -> u128 {
    let free = if zero_sum_only { length.saturating_sub(1) } else { length };
    binomial((order + free).saturating_sub(1) as u128, free as u128)
}

/// Result of a possibly truncated enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub vectors: Vec<Vec<u32>>,
    /// Candidates walked, out of `total`.
    pub walked: u128,
    pub total: u128,
}

impl Prefix {
    pub fn is_complete(&self) -> bool {
        self.walked >= self.total
    }

    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.walked as f64 / self.total as f64
        }
    }
}

/// Result of [`SequenceEnumerator::scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    /// First failing representative in enumeration order.
    pub failure: Option<Vec<u32>>,
    pub walked: u128,
    pub total: u128,
    /// Representatives tested.
    pub checked: u64,
    /// `stop` fired before the walk finished.
    pub stopped: bool,
}

impl ScanOutcome {
    pub fn is_complete(&self) -> bool {
        !self.stopped && self.walked >= self.total
    }

    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.walked as f64 / self.total as f64
        }
    }
}

enum Verdict {
    Skip,
    Holds,
    Fails(Vec<u32>),
}

const SCAN_CHUNK: usize = 1 << 14;

pub struct SequenceEnumerator<'a> {
    table: &'a GroupTable,
    automorphisms: Option<Vec<Permutation>>,
}

impl<'a> SequenceEnumerator<'a> {
    pub fn new(table: &'a GroupTable) -> Self {
        let automorphisms = automorphism_generators(table, DEFAULT_SYMMETRY_CAP)
            .ok()
            .and_then(|gens| automorphism_group(table, &gens, DEFAULT_CLOSURE_CAP));
        SequenceEnumerator { table, automorphisms }
    }

    pub fn without_symmetry(table: &'a GroupTable) -> Self {
        SequenceEnumerator {
            table,
            automorphisms: None,
        }
    }

    pub fn table(&self) -> &GroupTable {
        self.table
    }

    /// Whether orbit reduction is available.
    pub fn has_symmetry(&self) -> bool {
        self.automorphisms.is_some()
    }

    pub fn automorphisms(&self) -> Option<&[Permutation]> {
        self.automorphisms.as_deref()
    }

    pub fn is_orbit_representative(&self, v: &[u32]) -> bool {
        let Some(auts) = &self.automorphisms else {
            return true;
        };
        let mut img = Vec::with_capacity(v.len());
        auts.iter().skip(1).all(|p| {
            img.clear();
            img.extend(v.iter().map(|&x| p.apply(x)));
            img.sort_unstable();
            img.as_slice() >= v
        })
    }

    /// Sorted index vectors of all multisets of `length`, in lexicographic
    /// order.
    pub fn index_vectors(
        &self,
        length: usize,
        zero_sum_only: bool,
        up_to_aut: bool,
        budget: u64,
    ) -> Result<Vec<Vec<u32>>, EnumerationError> {
        let needed = multiset_count(self.table.order(), length, zero_sum_only);
        if needed > budget as u128 {
            return Err(EnumerationError::BudgetExceeded { needed, budget });
        }
        Ok(self.prefix(length, zero_sum_only, up_to_aut, budget).vectors)
    }

    /// Like [`index_vectors`](Self::index_vectors) but stops after walking
    /// `limit` candidates instead of failing, and reports how far it got.
    pub fn prefix(&self, length: usize, zero_sum_only: bool, up_to_aut: bool, limit: u64) -> Prefix {
        let total = multiset_count(self.table.order(), length, zero_sum_only);
        let mut raw = Vec::new();
        let mut walked = 0u64;
        if length == 0 {
            raw.push(Vec::new());
            walked = 1;
        } else {
            let free = if zero_sum_only { length - 1 } else { length };
            let mut cur = Vec::with_capacity(length);
            self.walk(free, 0, 0, &mut cur, &mut |cur, sum| {
                if walked >= limit {
                    return false;
                }
                walked += 1;
                if zero_sum_only {
                    let last = self.table.neg(sum);
                    if cur.last().map_or(true, |&l| last >= l) {
                        let mut v = cur.to_vec();
                        v.push(last);
                        raw.push(v);
                    }
                } else {
                    raw.push(cur.to_vec());
                }
                true
            });
        }
        let vectors = if up_to_aut && self.has_symmetry() {
            self.keep_representatives(raw)
        } else {
            raw
        };
        Prefix {
            vectors,
            walked: walked as u128,
            total,
        }
    }

    fn walk(
        &self,
        remaining: usize,
        start: u32,
        sum: u32,
        cur: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32], u32) -> bool,
    ) -> bool {
        if remaining == 0 {
            return emit(cur, sum);
        }
        for g in start..self.table.order() as u32 {
            cur.push(g);
            let go_on = self.walk(remaining - 1, g, self.table.add(sum, g), cur, emit);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Streams multisets in lexicographic order, in chunks, and returns the
    /// first orbit representative for which `fails` holds. Walks at most
    /// `limit` candidates and checks `stop` between chunks.
    pub fn scan<F>(
        &self,
        length: usize,
        zero_sum_only: bool,
        up_to_aut: bool,
        limit: u64,
        stop: &dyn Fn() -> bool,
        fails: F,
    ) -> ScanOutcome
    where
        F: Fn(&[u32]) -> bool + Sync,
    {
        let reduce = up_to_aut && self.has_symmetry();
        let mut out = ScanOutcome {
            failure: None,
            walked: 0,
            total: multiset_count(self.table.order(), length, zero_sum_only),
            checked: 0,
            stopped: false,
        };
        let mut chunk: Vec<Vec<u32>> = Vec::with_capacity(SCAN_CHUNK);
        let flush = |chunk: &mut Vec<Vec<u32>>, out: &mut ScanOutcome| -> bool {
            let verdicts = self.judge(chunk, reduce, &fails);
            chunk.clear();
            for v in verdicts {
                match v {
                    Verdict::Skip => {}
                    Verdict::Holds => out.checked += 1,
                    Verdict::Fails(seq) => {
                        out.checked += 1;
                        out.failure = Some(seq);
                        return false;
                    }
                }
            }
            if stop() {
                out.stopped = true;
                return false;
            }
            true
        };
        if length == 0 {
            chunk.push(Vec::new());
            out.walked = 1;
            flush(&mut chunk, &mut out);
            return out;
        }
        let free = if zero_sum_only { length - 1 } else { length };
        let mut cur = Vec::with_capacity(length);
        let mut walked = 0u64;
        let mut halted = false;
        self.walk(free, 0, 0, &mut cur, &mut |cur, sum| {
            if walked >= limit {
                return false;
            }
            walked += 1;
            if zero_sum_only {
                let last = self.table.neg(sum);
                if cur.last().map_or(true, |&l| last >= l) {
                    let mut v = cur.to_vec();
                    v.push(last);
                    chunk.push(v);
                }
            } else {
                chunk.push(cur.to_vec());
            }
            if chunk.len() == SCAN_CHUNK && !flush(&mut chunk, &mut out) {
                halted = true;
                return false;
            }
            true
        });
        if !halted {
            flush(&mut chunk, &mut out);
        }
        out.walked = walked as u128;
        out
    }

    fn judge<F>(&self, chunk: &[Vec<u32>], reduce: bool, fails: &F) -> Vec<Verdict>
    where
        F: Fn(&[u32]) -> bool + Sync,
    {
        let one = |v: &Vec<u32>| {
            if reduce && !self.is_orbit_representative(v) {
                Verdict::Skip
            } else if fails(v) {
                Verdict::Fails(v.clone())
            } else {
                Verdict::Holds
            }
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            chunk.par_iter().map(one).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            chunk.iter().map(one).collect()
        }
    }

    #[cfg(feature = "parallel")]
    fn keep_representatives(&self, raw: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
        use rayon::prelude::*;
        raw.into_par_iter()
            .filter(|v| self.is_orbit_representative(v))
            .collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn keep_representatives(&self, raw: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
        raw.into_iter()
            .filter(|v| self.is_orbit_representative(v))
            .collect()
    }

    pub fn sequences(
        &self,
        length: usize,
        zero_sum_only: bool,
        up_to_aut: bool,
        budget: u64,
    ) -> Result<Vec<Sequence>, EnumerationError> {
        let group = self.table.group();
        Ok(self
            .index_vectors(length, zero_sum_only, up_to_aut, budget)?
            .into_iter()
            .map(|v| Sequence::from_indices(group, v).expect("indices come from the table"))
            .collect())
    }
}

/// All multisets of `length` over `group`, optionally zero-sum only and
/// reduced to orbit representatives.
pub fn enumerate_sequences(
    group: &AbelianGroup,
    length: usize,
    zero_sum_only: bool,
    up_to_aut: bool,
    budget: u64,
) -> Result<Vec<Sequence>, EnumerationError> {
    let table = GroupTable::new(group)?;
    SequenceEnumerator::new(&table).sequences(length, zero_sum_only, up_to_aut, budget)
}
