//! Group catalogs used by the verifier and the test suites.

use crate::closed_forms::is_prime;
use crate::group::AbelianGroup;

fn partitions(k: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k == 0 {
        out.push(cur.clone());
        return;
    }
    for part in (1..=k.min(max_part)).rev() {
        cur.push(part);
        partitions(k - part, part, cur, out);
        cur.pop();
    }
}

/// Every nontrivial abelian p-group of order at most `max_order`, sorted by
/// order and then by invariant factors.
pub fn abelian_p_groups(max_order: u64) -> Vec<AbelianGroup> {
    let mut out = Vec::new();
    for p in (2..=max_order).filter(|&p| is_prime(p)) {
        let mut k = 1u32;
        while p.checked_pow(k).is_some_and(|q| q <= max_order) {
            let mut parts = Vec::new();
            partitions(k, k, &mut Vec::new(), &mut parts);
            for lambda in parts {
                let factors: Vec<u64> = lambda.iter().map(|&e| p.pow(e)).collect();
                out.push(AbelianGroup::new(&factors).expect("prime powers are valid factors"));
            }
            k += 1;
        }
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    out
}

/// All abelian p-groups of order at most 32 together with `C_6`,
/// `C_2 ⊕ C_12` and `C_3 ⊕ C_9`.
pub fn verification_catalog() -> Vec<AbelianGroup> {
    let mut out = abelian_p_groups(32);
    for f in [&[6u64][..], &[2, 12], &[3, 9]] {
        let g = AbelianGroup::new(f).expect("valid factors");
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Groups small enough for exhaustive checks of every invariant in tests.
pub fn small_catalog() -> Vec<AbelianGroup> {
    let mut out: Vec<AbelianGroup> = (2..=9u64)
        .map(|n| AbelianGroup::cyclic(n).expect("valid"))
        .collect();
    for f in [&[2u64, 2][..], &[2, 4], &[3, 3], &[2, 2, 2], &[2, 6]] {
        out.push(AbelianGroup::new(f).expect("valid"));
    }
    out
}
