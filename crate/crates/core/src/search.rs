//! Exact computation of `s_L(G)` as one plus the length of a longest
//! sequence with no zero-sum subsequence of length in `L` (an *avoider*).
//!
//! Being an avoider is hereditary, so the search walks multisets as sorted
//! index vectors, extending each node only by elements at or after its last
//! one and dropping any child that already holds an admissible zero-sum.
//! Every avoider is reached exactly once. Each child reuses its parent's
//! length table; whether the child is still an avoider is decided from a
//! single row of the parent table before the child table is built.
//!
//! The reported certificate is the lexicographically least longest avoider.
//! Depth-first order visits avoiders in lexicographic order, so the first
//! longest avoider a worker finds is the least in its subtree; subtrees are
//! merged by (length, lexicographic order). Pruning only ever discards nodes
//! that cannot reach that certificate, so value and certificate do not depend
//! on thread count or on whether symmetry pruning is enabled.
//!
//! Pruning rules:
//! - orbits: a prefix is dropped if some automorphism maps it to a sorted
//!   vector that is lexicographically smaller. Sorting the image of a longer
//!   sequence can only lower each position, so every prefix of the least
//!   longest avoider survives. With the full automorphism list this runs at
//!   every depth below `symmetry_depth`; when the list is too large only
//!   depths 0 and 1 are filtered, from generators alone.
//! - if every length in `L` is a multiple of `exp(G)`, translates of avoiders
//!   are avoiders, so the least one contains 0 and the root is pinned to 0.
//!   Translations then join the automorphisms in the orbit test.
//! - an avoider holds fewer than `t` copies of `g` whenever `t ∈ L` is a
//!   multiple of `ord(g)`; blocked elements stay blocked, which bounds the
//!   length of any extension.
//! - for `L = N+` a zero-sum free `S` satisfies `|Σ(Sg)| > |Σ(S)|`, so no
//!   extension of `S` is longer than `|S| + |G| - 1 - |Σ(S)|`.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{
    automorphism_generators, automorphism_group, OrbitFilter, Permutation, DEFAULT_SYMMETRY_CAP,
};
use crate::closed_forms::d_star;
use crate::group::{AbelianGroup, GroupError, GroupTable, DEFAULT_ENUMERATION_CAP};
use crate::sequence::{extend_rows, length_set_capped, Sequence, SequenceError};
use crate::spec::{intersects, words_for, LengthSpec, SpecError};

/// Largest automorphism group tested in full against every shallow prefix.
const ORBIT_TEST_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("index {i} must lie in [1, {n}]")]
    InvalidIndex { i: u32, n: u64 },
    #[error("unknown invariant {0:?}")]
    UnknownInvariant(String),
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Worker threads; 1 runs the plain sequential search.
    pub threads: usize,
    /// Depth at which the tree is cut into independent subtrees.
    pub split_depth: usize,
    pub symmetry: bool,
    /// Orbit pruning is applied at depths below this.
    pub symmetry_depth: usize,
    pub symmetry_cap: u64,
    pub enumeration_cap: u64,
    pub deadline: Option<Instant>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            threads: default_threads(),
            split_depth: 2,
            symmetry: true,
            symmetry_depth: 12,
            symmetry_cap: DEFAULT_SYMMETRY_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            deadline: None,
        }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig {
            threads: 1,
            ..Default::default()
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }
}

fn default_threads() -> usize {
    if cfg!(feature = "parallel") {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub symmetry_prunes: u64,
    pub bound_prunes: u64,
    pub subtrees: u64,
    pub elapsed_ms: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.symmetry_prunes += other.symmetry_prunes;
        self.bound_prunes += other.bound_prunes;
        self.subtrees += other.subtrees;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completion {
    Exhaustive,
    /// An avoider of the full length cap can still be extended.
    CapReached,
    TimedOut,
}

#[derive(Clone, Debug)]
pub struct AvoiderSearch {
    pub longest: usize,
    pub certificate: Sequence,
    pub completion: Completion,
    pub stats: SearchStats,
}

struct Problem<'a> {
    table: &'a GroupTable,
    order: usize,
    words: usize,
    /// bit `j` set iff `j + 1 ∈ L`
    blocked: Vec<u64>,
    candidates: Vec<u32>,
    cap: usize,
    sigma_bound: bool,
    /// Most copies of each element an avoider can hold; `usize::MAX` if
    /// no multiple of its order lies in `L` within the cap.
    max_copies: Vec<usize>,
    orbits: Option<OrbitFilter>,
    /// Non-identity automorphisms, when few enough to test every prefix.
    automorphisms: Option<Vec<Permutation>>,
    /// Prefix tests stop at this depth; they cost more with more
    /// automorphisms while deep prefixes rarely fail them.
    full_test_depth: usize,
    symmetry_depth: usize,
    /// All lengths in `L` are multiples of `exp(G)`, so translating every
    /// term by a constant preserves avoiders and the lex-least one starts
    /// with 0.
    pin_zero: bool,
}

struct Shared {
    best: AtomicUsize,
    abort: AtomicBool,
    deadline: Option<Instant>,
}

struct Worker<'p> {
    p: &'p Problem<'p>,
    shared: &'p Shared,
    levels: Vec<Vec<u64>>,
    reach: Vec<usize>,
    path: Vec<u32>,
    pos: Vec<usize>,
    best_len: Option<usize>,
    best: Vec<u32>,
    stats: SearchStats,
    cap_hit: bool,
    /// When set, nodes at this depth are queued instead of explored.
    split_at: Option<usize>,
    frontier: Vec<Vec<u32>>,
}

impl<'p> Worker<'p> {
    fn new(p: &'p Problem<'p>, shared: &'p Shared) -> Self {
        let mut levels = vec![vec![0u64; p.order * p.words]; p.cap + 1];
        // the empty subsequence: length 0 summing to 0
        levels[0][0] = 1;
        Worker {
            p,
            shared,
            levels,
            reach: vec![0; p.cap + 1],
            path: Vec::new(),
            pos: Vec::new(),
            best_len: None,
            best: Vec::new(),
            stats: SearchStats::default(),
            cap_hit: false,
            split_at: None,
            frontier: Vec::new(),
        }
    }

    fn set_prefix(&mut self, prefix: &[u32]) {
        self.path.clear();
        self.pos.clear();
        for (d, &g) in prefix.iter().enumerate() {
            let (lo, hi) = self.levels.split_at_mut(d + 1);
            self.reach[d + 1] = extend_rows(&lo[d], &mut hi[0], self.p.words, g, self.p.table);
            self.path.push(g);
            let k = self
                .p
                .candidates
                .binary_search(&g)
                .expect("prefix uses candidate elements");
            self.pos.push(k);
        }
    }

    #[inline]
    fn row(&self, depth: usize, h: u32) -> &[u64] {
        let w = self.p.words;
        &self.levels[depth][h as usize * w..(h as usize + 1) * w]
    }

    /// Whether appending `g` at `depth` creates an admissible zero-sum: the
    /// new zero-sum lengths are `1 + (lengths summing to -g)`.
    #[inline]
    fn child_blocked(&self, depth: usize, g: u32) -> bool {
        intersects(self.row(depth, self.p.table.neg(g)), &self.p.blocked)
    }

    /// `depth` plus the copies still available of every unblocked candidate;
    /// candidates never unblock as the sequence grows. Stops counting once
    /// past `threshold`.
    fn capacity_bound(&self, depth: usize, start: usize, threshold: usize) -> usize {
        let last = self.path.last().copied();
        let run = self.path.iter().rev().take_while(|&&x| Some(x) == last).count();
        let mut ub = depth;
        for &g in &self.p.candidates[start..] {
            if self.child_blocked(depth, g) {
                continue;
            }
            let copies = self.p.max_copies[g as usize];
            if copies == usize::MAX {
                return usize::MAX;
            }
            ub += if Some(g) == last { copies.saturating_sub(run) } else { copies };
            if ub > threshold {
                break;
            }
        }
        ub
    }

    fn symmetric_skip(&self, depth: usize, g: u32) -> bool {
        if depth >= self.p.symmetry_depth {
            return false;
        }
        if depth == 0 && self.p.pin_zero && g != 0 {
            return true;
        }
        if let Some(auts) = &self.p.automorphisms {
            return depth > 0 && depth < self.p.full_test_depth && !self.least_in_orbit(auts, g);
        }
        match (&self.p.orbits, depth) {
            (Some(orbits), 0) => !orbits.first_ok(g),
            (Some(orbits), 1) => !orbits.pair_ok(self.path[0], g),
            _ => false,
        }
    }

    /// Whether `path + g` is lexicographically least among its images.
    fn least_in_orbit(&self, auts: &[Permutation], g: u32) -> bool {
        let mut cand = self.path.clone();
        cand.push(g);
        let mut img = Vec::with_capacity(cand.len());
        if !self.p.pin_zero {
            return auts.iter().all(|sigma| {
                img.clear();
                img.extend(cand.iter().map(|&x| sigma.apply(x)));
                !sorts_below(&img, &cand)
            });
        }
        // An image beats `cand` (which starts with its zeros) only if it has
        // at least as many zeros, so the shift must send a value of at least
        // that multiplicity to 0.
        let table = self.p.table;
        let lead = cand.iter().take_while(|&&x| x == cand[0]).count();
        let mut shifted = Vec::with_capacity(cand.len());
        let mut k = 0;
        while k < cand.len() {
            let y = cand[k];
            let run = cand[k..].iter().take_while(|&&x| x == y).count();
            k += run;
            if run < lead {
                continue;
            }
            shifted.clear();
            shifted.extend(cand.iter().map(|&x| table.sub(x, y)));
            if y != 0 && sorts_below(&shifted, &cand) {
                return false;
            }
            for sigma in auts {
                img.clear();
                img.extend(shifted.iter().map(|&x| sigma.apply(x)));
                if sorts_below(&img, &cand) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize) {
        self.stats.nodes += 1;
        if self.stats.nodes & 0x3fff == 0 {
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.abort.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.shared.abort.load(Ordering::Relaxed) {
            return;
        }
        if self.best_len.map_or(true, |b| depth > b) {
            self.best_len = Some(depth);
            self.best.clone_from(&self.path);
            self.shared.best.fetch_max(depth, Ordering::Relaxed);
        }
        let start = self.pos.last().copied().unwrap_or(0);
        if depth == self.p.cap {
            let extendable = self.p.candidates[start..]
                .iter()
                .any(|&g| !self.child_blocked(depth, g));
            self.cap_hit |= extendable;
            return;
        }
        // a subtree is useless if it cannot beat the local best, or cannot
        // even tie the global one
        let local = self.best_len.unwrap_or(0);
        let threshold = local.max(self.shared.best.load(Ordering::Relaxed).saturating_sub(1));
        if self.p.sigma_bound && depth + (self.p.order - 1 - self.reach[depth]) <= threshold {
            self.stats.bound_prunes += 1;
            return;
        }
        if self.capacity_bound(depth, start, threshold) <= threshold {
            self.stats.bound_prunes += 1;
            return;
        }
        for k in start..self.p.candidates.len() {
            let g = self.p.candidates[k];
            if self.child_blocked(depth, g) {
                continue;
            }
            if self.symmetric_skip(depth, g) {
                self.stats.symmetry_prunes += 1;
                continue;
            }
            if self.split_at == Some(depth + 1) {
                let mut prefix = self.path.clone();
                prefix.push(g);
                self.frontier.push(prefix);
                continue;
            }
            let (lo, hi) = self.levels.split_at_mut(depth + 1);
            self.reach[depth + 1] = extend_rows(&lo[depth], &mut hi[0], self.p.words, g, self.p.table);
            self.path.push(g);
            self.pos.push(k);
            self.dfs(depth + 1);
            self.path.pop();
            self.pos.pop();
            if self.shared.abort.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn outcome(self) -> Outcome {
        Outcome {
            best_len: self.best_len,
            best: self.best,
            stats: self.stats,
            cap_hit: self.cap_hit,
        }
    }
}

/// Whether `img`, once sorted, is lexicographically below the sorted
/// `target` of the same length. Compares value runs from the bottom up and
/// usually stops after the first run.
fn sorts_below(img: &[u32], target: &[u32]) -> bool {
    let mut pos = 0;
    let mut floor: Option<u32> = None;
    while pos < target.len() {
        let Some(v) = img.iter().copied().filter(|&x| floor.map_or(true, |f| x > f)).min() else {
            return false;
        };
        let t = target[pos];
        if v != t {
            return v < t;
        }
        let copies = img.iter().filter(|&&x| x == v).count();
        let run = target[pos..].iter().take_while(|&&x| x == t).count();
        if copies != run {
            return copies > run;
        }
        pos += run;
        floor = Some(v);
    }
    false
}

struct Outcome {
    best_len: Option<usize>,
    best: Vec<u32>,
    stats: SearchStats,
    cap_hit: bool,
}

/// Better = longer, then lexicographically smaller.
fn better(a: &(usize, Vec<u32>), b: &(usize, Vec<u32>)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Longest avoider of `spec` over `group`, up to `length_cap`.
pub fn max_l_free(
    group: &AbelianGroup,
    spec: &LengthSpec,
    length_cap: usize,
    cfg: &SearchConfig,
) -> Result<AvoiderSearch, SearchError> {
    let started = Instant::now();
    let table = GroupTable::with_cap(group, cfg.enumeration_cap)?;
    let n = group.exponent();
    spec.validate(n)?;
    let order = table.order();
    let cap = length_cap;

    let words = words_for(cap);
    let mut blocked = vec![0u64; words];
    for j in 0..=cap {
        if spec.contains_unchecked(j as u64 + 1, n) {
            blocked[j / 64] |= 1 << (j % 64);
        }
    }
    // 0 alone is a zero-sum of length 1
    let skip_zero = spec.contains_unchecked(1, n);
    let candidates: Vec<u32> = (0..order as u32).filter(|&g| !(skip_zero && g == 0)).collect();
    let max_copies: Vec<usize> = (0..order as u32)
        .map(|g| {
            let ord = table.element_order(g) as usize;
            (1..=(cap + 1) / ord)
                .map(|m| m * ord)
                .find(|&t| spec.contains_unchecked(t as u64, n))
                .map_or(usize::MAX, |t| t - 1)
        })
        .collect();
    let generators = if cfg.symmetry && cfg.symmetry_depth > 0 {
        automorphism_generators(&table, cfg.symmetry_cap).ok()
    } else {
        None
    };
    let automorphisms = generators
        .as_ref()
        .and_then(|gens| automorphism_group(&table, gens, ORBIT_TEST_LIMIT))
        .map(|mut all| {
            all.remove(0);
            all
        });
    let orbits = generators.as_ref().map(|gens| OrbitFilter::new(order, gens));
    let problem = Problem {
        table: &table,
        order,
        words,
        blocked,
        candidates,
        cap,
        sigma_bound: *spec == LengthSpec::All,
        max_copies,
        pin_zero: cfg.symmetry && !skip_zero && n > 1 && (1..=cap + 1).all(|t| t as u64 % n == 0 || !spec.contains_unchecked(t as u64, n)),
        orbits,
        full_test_depth: match &automorphisms {
            Some(a) if a.len() >= 32 => cfg.symmetry_depth.min(8),
            _ => cfg.symmetry_depth,
        },
        automorphisms,
        symmetry_depth: if cfg.symmetry { cfg.symmetry_depth } else { 0 },
    };
    let shared = Shared {
        best: AtomicUsize::new(0),
        abort: AtomicBool::new(false),
        deadline: cfg.deadline,
    };

    let split = cfg.split_depth.min(cap);
    let mut outcomes = Vec::new();
    if cfg.threads <= 1 || split == 0 || !cfg!(feature = "parallel") {
        let mut w = Worker::new(&problem, &shared);
        w.dfs(0);
        outcomes.push(w.outcome());
    } else {
        let mut top = Worker::new(&problem, &shared);
        top.split_at = Some(split);
        top.dfs(0);
        let tasks = std::mem::take(&mut top.frontier);
        outcomes.push(top.outcome());
        outcomes.extend(run_subtrees(&problem, &shared, &tasks, cfg.threads));
    }

    let mut stats = SearchStats::default();
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut cap_hit = false;
    for o in outcomes {
        stats.absorb(&o.stats);
        cap_hit |= o.cap_hit;
        if let Some(len) = o.best_len {
            let cand = (len, o.best);
            if best.as_ref().map_or(true, |b| better(&cand, b)) {
                best = Some(cand);
            }
        }
    }
    let (longest, cert) = best.unwrap_or((0, Vec::new()));
    let completion = if shared.abort.load(Ordering::Relaxed) {
        Completion::TimedOut
    } else if cap_hit {
        Completion::CapReached
    } else {
        Completion::Exhaustive
    };
    stats.elapsed_ms = started.elapsed().as_millis() as u64;
    Ok(AvoiderSearch {
        longest,
        certificate: Sequence::from_indices(group, cert)?,
        completion,
        stats,
    })
}

#[cfg(feature = "parallel")]
fn run_subtrees(problem: &Problem<'_>, shared: &Shared, tasks: &[Vec<u32>], threads: usize) -> Vec<Outcome> {
    use rayon::prelude::*;

    let explore = |prefix: &Vec<u32>| {
        let mut w = Worker::new(problem, shared);
        w.set_prefix(prefix);
        w.stats.subtrees = 1;
        w.dfs(prefix.len());
        w.outcome()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| tasks.par_iter().map(explore).collect()),
        Err(_) => tasks.iter().map(explore).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_subtrees(problem: &Problem<'_>, shared: &Shared, tasks: &[Vec<u32>], _threads: usize) -> Vec<Outcome> {
    tasks
        .iter()
        .map(|prefix| {
            let mut w = Worker::new(problem, shared);
            w.set_prefix(prefix);
            w.stats.subtrees = 1;
            w.dfs(prefix.len());
            w.outcome()
        })
        .collect()
}

/// Memory allowed for the per-depth sum tables of one worker.
const TABLE_BYTES: usize = 256 << 20;

/// Default search depth. When `exp(G) ∈ L` we have `s_L(G) <= s(G) <=
/// |G| + exp(G) - 1`, so that depth makes the search exhaustive; it is
/// lowered if the sum tables would not fit in memory. Otherwise
/// `4 exp(G) + D*(G)`.
pub fn default_length_cap(group: &AbelianGroup, spec: &LengthSpec) -> usize {
    let n = group.exponent();
    let fallback = (4 * n + d_star(group)) as usize;
    if spec.validate(n).is_err() || !spec.contains_unchecked(n, n) {
        return fallback;
    }
    let full = (group.order() + n - 1) as usize;
    let order = group.order() as usize;
    let fits = |cap: usize| (cap + 1).saturating_mul(order).saturating_mul(words_for(cap) * 8) <= TABLE_BYTES;
    if fits(full) {
        return full;
    }
    let mut cap = fallback;
    while cap < full && fits(cap * 2) {
        cap *= 2;
    }
    cap.max(fallback).min(full)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantResult {
    pub group: AbelianGroup,
    pub spec: LengthSpec,
    /// `s_L(G)`, or a lower bound when not exhaustive.
    pub value: u64,
    pub certificate: Sequence,
    pub exhaustive: bool,
    pub completion: Completion,
    pub stats: SearchStats,
}

impl InvariantResult {
    /// Certificate has length `value - 1` and no admissible zero-sum.
    pub fn certificate_is_valid(&self) -> bool {
        let Ok(table) = GroupTable::new(&self.group) else {
            return false;
        };
        let n = self.group.exponent();
        self.certificate.len() as u64 + 1 == self.value
            && length_set_capped(&table, &self.certificate, self.certificate.len())
                .and_then(|ls| Ok(!ls.meets(&self.spec, n)?))
                .unwrap_or(false)
    }

    pub fn to_record(&self) -> ResultRecord {
        ResultRecord {
            group: self.group.to_string(),
            spec: self.spec.to_string(),
            value: self.value,
            exhaustive: self.exhaustive,
            completion: self.completion,
            certificate: self.certificate.to_records(),
            stats: self.stats.clone(),
        }
    }

    pub fn from_record(rec: &ResultRecord) -> Result<Self, SearchError> {
        let group: AbelianGroup = rec.group.parse()?;
        let spec: LengthSpec = rec.spec.parse()?;
        let certificate = Sequence::from_records(&group, &rec.certificate)?;
        Ok(InvariantResult {
            group,
            spec,
            value: rec.value,
            certificate,
            exhaustive: rec.exhaustive,
            completion: rec.completion,
            stats: rec.stats.clone(),
        })
    }
}

/// Persisted form of an [`InvariantResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub group: String,
    pub spec: String,
    pub value: u64,
    pub exhaustive: bool,
    pub completion: Completion,
    pub certificate: Vec<Vec<u64>>,
    pub stats: SearchStats,
}

pub fn s_l(group: &AbelianGroup, spec: &LengthSpec, cfg: &SearchConfig) -> Result<InvariantResult, SearchError> {
    s_l_capped(group, spec, default_length_cap(group, spec), cfg)
}

pub fn s_l_capped(
    group: &AbelianGroup,
    spec: &LengthSpec,
    length_cap: usize,
    cfg: &SearchConfig,
) -> Result<InvariantResult, SearchError> {
    let found = max_l_free(group, spec, length_cap, cfg)?;
    Ok(InvariantResult {
        group: group.clone(),
        spec: *spec,
        value: found.longest as u64 + 1,
        certificate: found.certificate,
        exhaustive: found.completion == Completion::Exhaustive,
        completion: found.completion,
        stats: found.stats,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    Davenport,
    Eta,
    Egz,
    Zeta(u32),
    EtaI(u32),
}

impl Invariant {
    /// Parses `davenport | eta | egz | zeta | eta_i`; the last two need `index`.
    pub fn from_name(name: &str, index: Option<u32>) -> Result<Self, SearchError> {
        let need = || index.ok_or_else(|| SearchError::UnknownInvariant(format!("{name} needs an index")));
        Ok(match name {
            "davenport" | "d" => Invariant::Davenport,
            "eta" => Invariant::Eta,
            "egz" | "egz_s" | "s" => Invariant::Egz,
            "zeta" => Invariant::Zeta(need()?),
            "eta_i" => Invariant::EtaI(need()?),
            other => return Err(SearchError::UnknownInvariant(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Invariant::Davenport => "davenport",
            Invariant::Eta => "eta",
            Invariant::Egz => "egz",
            Invariant::Zeta(_) => "zeta",
            Invariant::EtaI(_) => "eta_i",
        }
    }

    pub fn index(&self) -> Option<u32> {
        match self {
            Invariant::Zeta(i) | Invariant::EtaI(i) => Some(*i),
            _ => None,
        }
    }

    pub fn spec(&self, exponent: u64) -> Result<LengthSpec, SearchError> {
        let n = exponent as u32;
        let check = |i: u32| {
            if i == 0 || i as u64 > exponent {
                Err(SearchError::InvalidIndex { i, n: exponent })
            } else {
                Ok(i)
            }
        };
        Ok(match *self {
            Invariant::Davenport => LengthSpec::All,
            Invariant::Eta => LengthSpec::Range(1, n),
            Invariant::Egz => LengthSpec::Exact(n),
            Invariant::Zeta(i) => LengthSpec::ResidueUpFrom(check(i)?),
            Invariant::EtaI(i) => LengthSpec::Range(check(i)?, n),
        })
    }
}

pub fn named_invariant(
    group: &AbelianGroup,
    invariant: Invariant,
    cfg: &SearchConfig,
) -> Result<InvariantResult, SearchError> {
    let spec = invariant.spec(group.exponent())?;
    s_l(group, &spec, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_s_l;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn seq(grp: &AbelianGroup, idx: &[u32]) -> Sequence {
        Sequence::from_indices(grp, idx.iter().copied()).unwrap()
    }

    #[test]
    fn klein_four_davenport() {
        let grp = g(&[2, 2]);
        let r = max_l_free(&grp, &LengthSpec::All, 10, &SearchConfig::sequential()).unwrap();
        assert_eq!(r.longest, 2);
        assert_eq!(r.certificate, seq(&grp, &[1, 2]));
        assert_eq!(r.completion, Completion::Exhaustive);
    }

    #[test]
    fn cyclic_three_residue_avoider_keeps_zero() {
        let grp = g(&[3]);
        let r = max_l_free(&grp, &LengthSpec::ResidueUpFrom(2), 10, &SearchConfig::sequential()).unwrap();
        assert_eq!(r.longest, 3);
        assert_eq!(r.certificate, seq(&grp, &[0, 1, 1]));
    }

    #[test]
    fn cyclic_five_egz() {
        let r = max_l_free(&g(&[5]), &LengthSpec::Exact(5), 12, &SearchConfig::sequential()).unwrap();
        assert_eq!(r.longest, 8);
    }

    #[test]
    fn s_l_examples() {
        let cfg = SearchConfig::sequential();
        assert_eq!(s_l(&g(&[2, 2]), &LengthSpec::Range(1, 2), &cfg).unwrap().value, 4);
        assert_eq!(s_l(&g(&[3, 3]), &LengthSpec::Exact(3), &cfg).unwrap().value, 9);
        assert_eq!(s_l(&g(&[3]), &LengthSpec::Multiples, &cfg).unwrap().value, 5);
    }

    #[test]
    fn named_examples() {
        let cfg = SearchConfig::sequential();
        assert_eq!(named_invariant(&g(&[2, 4]), Invariant::Eta, &cfg).unwrap().value, 6);
        assert_eq!(named_invariant(&g(&[3]), Invariant::Zeta(2), &cfg).unwrap().value, 4);
        assert_eq!(named_invariant(&g(&[2]), Invariant::Davenport, &cfg).unwrap().value, 2);
        assert!(matches!(
            named_invariant(&g(&[3]), Invariant::Zeta(4), &cfg),
            Err(SearchError::InvalidIndex { i: 4, n: 3 })
        ));
        assert!(matches!(
            named_invariant(&g(&[3]), Invariant::EtaI(0), &cfg),
            Err(SearchError::InvalidIndex { .. })
        ));
    }

    #[test]
    fn trivial_group_values() {
        let cfg = SearchConfig::sequential();
        let t = AbelianGroup::trivial();
        for inv in [Invariant::Davenport, Invariant::Eta, Invariant::Egz, Invariant::Zeta(1)] {
            let r = named_invariant(&t, inv, &cfg).unwrap();
            assert_eq!(r.value, 1, "{inv:?}");
            assert!(r.exhaustive);
        }
    }

    #[test]
    fn agrees_with_direct_quantification() {
        let cfg = SearchConfig::sequential();
        for f in [&[2u64][..], &[3], &[4], &[2, 2], &[5], &[6]] {
            let grp = g(f);
            let table = GroupTable::new(&grp).unwrap();
            let n = grp.exponent() as u32;
            let mut specs = vec![LengthSpec::All, LengthSpec::Multiples, LengthSpec::Exact(n)];
            for i in 1..=n {
                specs.push(LengthSpec::ResidueUpFrom(i));
                specs.push(LengthSpec::Range(i, n));
            }
            for spec in specs {
                let searched = s_l(&grp, &spec, &cfg).unwrap();
                let direct = naive_s_l(&table, &spec, 12).unwrap();
                assert_eq!(searched.value as usize, direct, "{grp} {spec}");
                assert!(searched.certificate_is_valid());
            }
        }
    }

    #[test]
    fn cap_reached_is_reported() {
        // lengths {2} over C_3: 1^k never has a zero-sum pair, so s_L is infinite
        let r = s_l_capped(&g(&[3]), &LengthSpec::Exact(2), 7, &SearchConfig::sequential()).unwrap();
        assert_eq!(r.completion, Completion::CapReached);
        assert!(!r.exhaustive);
        assert_eq!(r.value, 8);
    }

    #[test]
    fn symmetry_and_threads_do_not_change_results() {
        for f in [&[2u64, 4][..], &[3, 3], &[2, 2, 2], &[8]] {
            let grp = g(f);
            let n = grp.exponent() as u32;
            for spec in [LengthSpec::All, LengthSpec::Range(1, n), LengthSpec::Exact(n), LengthSpec::ResidueUpFrom(2.min(n))] {
                let base = s_l(&grp, &spec, &SearchConfig::sequential().with_symmetry(false)).unwrap();
                for threads in [1, 2, 4] {
                    for sym in [true, false] {
                        let cfg = SearchConfig::default().with_threads(threads).with_symmetry(sym);
                        let r = s_l(&grp, &spec, &cfg).unwrap();
                        assert_eq!((r.value, &r.certificate), (base.value, &base.certificate), "{grp} {spec}");
                    }
                }
            }
        }
    }

    #[test]
    fn sorted_comparison() {
        let cases: [(&[u32], &[u32]); 6] = [
            (&[3, 1, 2], &[1, 2, 3]),
            (&[3, 0, 2], &[1, 2, 3]),
            (&[1, 1, 5], &[1, 2, 2]),
            (&[2, 2, 1], &[1, 1, 5]),
            (&[4, 4], &[4, 5]),
            (&[0, 0, 0], &[0, 0, 0]),
        ];
        for (img, target) in cases {
            let mut sorted = img.to_vec();
            sorted.sort_unstable();
            assert_eq!(sorts_below(img, target), sorted.as_slice() < target, "{img:?} {target:?}");
        }
    }

    #[test]
    fn record_round_trip() {
        let r = named_invariant(&g(&[2, 4]), Invariant::Eta, &SearchConfig::sequential()).unwrap();
        let rec = r.to_record();
        assert_eq!(InvariantResult::from_record(&rec).unwrap(), r);
    }
}
