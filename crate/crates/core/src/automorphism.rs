//! Automorphisms of a finite abelian group, as permutations of element
//! indices. Used only for pruning, so any set of genuine automorphisms is
//! sound; a generating set just prunes more.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::group::{gcd, GroupTable};

/// Largest group order for which symmetry is computed at all.
pub const DEFAULT_SYMMETRY_CAP: u64 = 64;

/// Largest automorphism group materialized as a full element list.
pub const DEFAULT_CLOSURE_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("symmetry disabled: group of order {order} exceeds the symmetry cap {cap}")]
pub struct SymmetryDisabled {
    pub order: u64,
    pub cap: u64,
}

/// A permutation of `[0, |G|)`; `images[x]` is the image of element `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(order: usize) -> Self {
        Permutation {
            images: (0..order as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        }
    }
}

pub fn is_automorphism(table: &GroupTable, perm: &Permutation) -> bool {
    let n = table.order();
    if perm.images.len() != n || perm.apply(0) != 0 {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in &perm.images {
        if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
            return false;
        }
    }
    (0..n as u32).all(|a| {
        (a..n as u32).all(|b| perm.apply(table.add(a, b)) == table.add(perm.apply(a), perm.apply(b)))
    })
}

/// The homomorphism sending the i-th basis vector to `images[i]`.
fn basis_map(table: &GroupTable, basis_images: &[u32]) -> Permutation {
    let group = table.group();
    let images = (0..table.order() as u64)
        .map(|idx| {
            let x = group.element_at(idx).expect("index in range");
            x.coords()
                .iter()
                .zip(basis_images)
                .fold(0u32, |acc, (&c, &img)| table.add(acc, table.mul(c, img)))
        })
        .collect();
    Permutation { images }
}

fn basis_vector(table: &GroupTable, i: usize) -> u32 {
    let factors = table.group().factors();
    factors[i + 1..].iter().product::<u64>() as u32
}

/// A small generating set built from elementary moves on the invariant-factor
/// basis: unit scalings of one coordinate, transvections `e_i -> e_i + c e_j`
/// and swaps of equal factors. Candidates are verified before being returned.
pub fn automorphism_generators(
    table: &GroupTable,
    cap: u64,
) -> Result<Vec<Permutation>, SymmetryDisabled> {
    let order = table.order() as u64;
    if order > cap {
        return Err(SymmetryDisabled { order, cap });
    }
    let factors = table.group().factors().to_vec();
    let rank = factors.len();
    let basis: Vec<u32> = (0..rank).map(|i| basis_vector(table, i)).collect();

    let mut candidates: Vec<Vec<u32>> = Vec::new();
    for i in 0..rank {
        for u in 2..factors[i] {
            if gcd(u, factors[i]) == 1 {
                let mut imgs = basis.clone();
                imgs[i] = table.mul(u, basis[i]);
                candidates.push(imgs);
            }
        }
        for j in 0..rank {
            if i == j {
                continue;
            }
            let c = factors[j] / gcd(factors[i], factors[j]);
            let mut imgs = basis.clone();
            imgs[i] = table.add(basis[i], table.mul(c, basis[j]));
            candidates.push(imgs);
            if j > i && factors[i] == factors[j] {
                let mut imgs = basis.clone();
                imgs.swap(i, j);
                candidates.push(imgs);
            }
        }
    }

    let mut seen = HashSet::new();
    let mut gens = Vec::new();
    for imgs in candidates {
        let perm = basis_map(table, &imgs);
        if !perm.is_identity() && is_automorphism(table, &perm) && seen.insert(perm.clone()) {
            gens.push(perm);
        }
    }
    Ok(gens)
}

/// Closure of `generators` under composition, identity first and the rest
/// sorted. `None` when the group would exceed `max_size` elements.
pub fn automorphism_group(
    table: &GroupTable,
    generators: &[Permutation],
    max_size: usize,
) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(table.order());
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id.clone()]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                if seen.len() > max_size {
                    return None;
                }
                queue.push_back(q);
            }
        }
    }
    let mut all: Vec<Permutation> = seen.into_iter().filter(|p| *p != id).collect();
    all.sort();
    all.insert(0, id);
    Some(all)
}

/// Every automorphism, found by backtracking over images of the basis
/// vectors: the image of `e_i` must have order dividing `n_i`, and the images
/// chosen so far must generate a subgroup of the full product size.
/// Returns `None` past `limit` automorphisms.
pub fn brute_force_automorphisms(table: &GroupTable, limit: usize) -> Option<Vec<Permutation>> {
    let factors = table.group().factors().to_vec();
    let order = table.order();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(factors.len());
    let mut span = vec![0u32];

    fn rec(
        table: &GroupTable,
        factors: &[u64],
        order: usize,
        chosen: &mut Vec<u32>,
        span: &[u32],
        out: &mut Vec<Permutation>,
        limit: usize,
    ) -> bool {
        let k = chosen.len();
        if k == factors.len() {
            out.push(basis_map(table, chosen));
            return out.len() <= limit;
        }
        let n_k = factors[k];
        for img in 0..order as u32 {
            if n_k % table.element_order(img) != 0 {
                continue;
            }
            let mut next: Vec<u32> = Vec::with_capacity(span.len() * n_k as usize);
            let mut present = vec![false; order];
            for &s in span {
                let mut acc = s;
                for _ in 0..n_k {
                    if !std::mem::replace(&mut present[acc as usize], true) {
                        next.push(acc);
                    }
                    acc = table.add(acc, img);
                }
            }
            if next.len() != span.len() * n_k as usize {
                continue;
            }
            chosen.push(img);
            let ok = rec(table, factors, order, chosen, &next, out, limit);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    if rec(table, &factors, order, &mut chosen, &mut span, &mut out, limit) {
        out.sort();
        Some(out)
    } else {
        None
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Orbit data for the first two levels of the search tree.
///
/// A first element `a` is kept iff it is the least element of its orbit. A
/// pair `(a, b)` is kept iff no automorphism fixing `a` moves `b` to a smaller
/// index, which is read off the diagonal orbit of `(a, b)` on ordered pairs.
#[derive(Clone, Debug)]
pub struct OrbitFilter {
    order: usize,
    first_ok: Vec<bool>,
    pair_ok: Vec<bool>,
}

impl OrbitFilter {
    pub fn new(order: usize, generators: &[Permutation]) -> Self {
        let mut elem_parent: Vec<u32> = (0..order as u32).collect();
        let pairs = order * order;
        let mut pair_parent: Vec<u32> = (0..pairs as u32).collect();
        for g in generators {
            for a in 0..order as u32 {
                union(&mut elem_parent, a, g.apply(a));
                for b in 0..order as u32 {
                    let img = g.apply(a) as usize * order + g.apply(b) as usize;
                    union(&mut pair_parent, a * order as u32 + b, img as u32);
                }
            }
        }
        // union keeps the smallest index as the root, so a root is its
        // orbit's minimum
        let first_ok = (0..order as u32).map(|a| find(&mut elem_parent, a) == a).collect();
        let mut least_partner: HashMap<(u32, u32), u32> = HashMap::new();
        for p in 0..pairs as u32 {
            let root = find(&mut pair_parent, p);
            let (a, b) = (p / order as u32, p % order as u32);
            least_partner
                .entry((root, a))
                .and_modify(|m| *m = (*m).min(b))
                .or_insert(b);
        }
        let pair_ok = (0..pairs as u32)
            .map(|p| {
                let root = find(&mut pair_parent, p);
                let (a, b) = (p / order as u32, p % order as u32);
                least_partner[&(root, a)] == b
            })
            .collect();
        OrbitFilter {
            order,
            first_ok,
            pair_ok,
        }
    }

    #[inline]
    pub fn first_ok(&self, a: u32) -> bool {
        self.first_ok[a as usize]
    }

    #[inline]
    pub fn pair_ok(&self, a: u32, b: u32) -> bool {
        self.pair_ok[a as usize * self.order + b as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbelianGroup;

    fn table(f: &[u64]) -> GroupTable {
        GroupTable::new(&AbelianGroup::new(f).unwrap()).unwrap()
    }

    fn aut_size(f: &[u64]) -> usize {
        let t = table(f);
        let gens = automorphism_generators(&t, 64).unwrap();
        for g in &gens {
            assert!(is_automorphism(&t, g));
        }
        automorphism_group(&t, &gens, DEFAULT_CLOSURE_CAP).unwrap().len()
    }

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(aut_size(&[3]), 2);
        assert_eq!(aut_size(&[2, 2]), 6);
        assert_eq!(aut_size(&[4]), 2);
        assert_eq!(aut_size(&[2]), 1);
        assert_eq!(aut_size(&[]), 1);
    }

    #[test]
    fn generators_generate_everything() {
        for f in [
            &[2u64, 4][..],
            &[2, 2, 2],
            &[3, 3],
            &[6],
            &[2, 2, 4],
            &[4, 4],
            &[2, 8],
            &[3, 9],
            &[2, 12],
            &[5, 5],
            &[9],
            &[2, 2, 2, 2],
        ] {
            let t = table(f);
            let brute = brute_force_automorphisms(&t, DEFAULT_CLOSURE_CAP).unwrap();
            for p in &brute {
                assert!(is_automorphism(&t, p), "{f:?}");
            }
            let gens = automorphism_generators(&t, 64).unwrap();
            let closure = automorphism_group(&t, &gens, DEFAULT_CLOSURE_CAP).unwrap();
            let mut closure_sorted = closure.clone();
            closure_sorted.sort();
            assert_eq!(closure_sorted, brute, "{f:?}");
        }
    }

    #[test]
    fn known_orders() {
        assert_eq!(aut_size(&[2, 2, 2]), 168);
        assert_eq!(aut_size(&[3, 3]), 48);
        assert_eq!(aut_size(&[2, 4]), 8);
        assert_eq!(aut_size(&[2, 2, 2, 2]), 20160);
    }

    #[test]
    fn symmetry_cap() {
        let t = table(&[128]);
        assert_eq!(
            automorphism_generators(&t, 64),
            Err(SymmetryDisabled { order: 128, cap: 64 })
        );
    }

    #[test]
    fn orbit_filter_on_cyclic_three() {
        let t = table(&[3]);
        let gens = automorphism_generators(&t, 64).unwrap();
        let f = OrbitFilter::new(3, &gens);
        assert!(f.first_ok(0) && f.first_ok(1) && !f.first_ok(2));
        // stabilizer of 1 is trivial
        assert!(f.pair_ok(1, 1) && f.pair_ok(1, 2));
        // stabilizer of 0 swaps 1 and 2
        assert!(f.pair_ok(0, 1) && !f.pair_ok(0, 2));
    }
}
