//! Brute-force reference implementations. These are deliberately naive and
//! share no code path with the dynamic program or the search; tests compare
//! the two.

use crate::automorphism::Permutation;
use crate::group::GroupTable;
use crate::sequence::Sequence;
use crate::spec::LengthSpec;

/// Zero-sum lengths by walking all `2^|S| - 1` nonempty sub-lists of the
/// expanded sequence.
pub fn naive_length_set(table: &GroupTable, s: &Sequence) -> Vec<usize> {
    let items = s.indices();
    assert!(items.len() < 30, "naive enumeration is exponential");
    let mut found = vec![false; items.len() + 1];
    for mask in 1u64..(1u64 << items.len()) {
        let mut sum = 0;
        for (bit, &g) in items.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                sum = table.add(sum, g);
            }
        }
        if sum == 0 {
            found[mask.count_ones() as usize] = true;
        }
    }
    (1..found.len()).filter(|&t| found[t]).collect()
}

/// All multisets of the given length over `[0, order)`, as sorted index
/// vectors in lexicographic order.
pub fn all_multisets(order: usize, length: usize) -> Vec<Vec<u32>> {
    fn rec(order: usize, length: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == length {
            out.push(cur.clone());
            return;
        }
        for g in start..order as u32 {
            cur.push(g);
            rec(order, length, g, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(order, length, 0, &mut Vec::new(), &mut out);
    out
}

/// `s_L(G)` straight from the definition: the least `l` such that every
/// multiset of length `l` has a zero-sum subsequence with length in `L`.
/// Longer sequences need no check because they contain a length-`l`
/// sub-multiset. Returns `None` if no `l <= max_len` works.
pub fn naive_s_l(table: &GroupTable, spec: &LengthSpec, max_len: usize) -> Option<usize> {
    let n = table.group().exponent();
    (1..=max_len).find(|&l| {
        all_multisets(table.order(), l).into_iter().all(|m| {
            let s = Sequence::from_indices(table.group(), m).expect("valid indices");
            naive_length_set(table, &s)
                .into_iter()
                .any(|t| spec.contains(t as u64, n).expect("valid spec"))
        })
    })
}

/// Orbit of a multiset under a list of permutations that is closed under
/// composition.
pub fn orbit(s: &[u32], group: &[Permutation]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = group
        .iter()
        .map(|p| {
            let mut img: Vec<u32> = s.iter().map(|&x| p.apply(x)).collect();
            img.sort_unstable();
            img
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
