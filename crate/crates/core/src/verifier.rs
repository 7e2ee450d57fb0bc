//! Enumeration-based checks of the structural results, and a hunter for
//! counterexamples to the long zero-sum conjecture.
//!
//! Every check produces [`Entry`] values; a failing entry carries a sequence
//! that can be re-checked with the sequence engine. Statements quantified over
//! all lengths are only sampled at finitely many lengths, and entries say so.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    bounds_eta, cf_extension, cf_pgroup, cf_rank2, d_star, extension_split, large_exponent, rank2_parameters, BoundsInput,
    ComplementData, Estimate, FormulaValue, Quantity, QuotientData,
};
use crate::enumerate::{ScanOutcome, SequenceEnumerator, DEFAULT_SEQUENCE_BUDGET};
use crate::group::{prime_power_decomposition, AbelianGroup, GroupTable};
use crate::search::{s_l, InvariantResult, SearchConfig};
use crate::sequence::{has_zero_sum_in, length_set, Sequence};
use crate::spec::LengthSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
    Capped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
            Status::Capped => "capped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub check: String,
    /// The statement being checked.
    pub anchor: String,
    pub status: Status,
    pub details: String,
    /// `[coords..., multiplicity]` records, as in [`Sequence::to_records`].
    pub counterexample: Option<Vec<Vec<u64>>>,
}

impl Entry {
    fn new(check: impl Into<String>, anchor: &str, status: Status, details: impl Into<String>) -> Self {
        Entry {
            check: check.into(),
            anchor: anchor.to_string(),
            status,
            details: details.into(),
            counterexample: None,
        }
    }

    fn with_counterexample(mut self, s: &Sequence) -> Self {
        self.counterexample = Some(s.to_records());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub group: AbelianGroup,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn has_failures(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn is_capped(&self) -> bool {
        self.count(Status::Capped) > 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifyBudget {
    pub search: SearchConfig,
    /// Largest number of multisets walked by one enumeration.
    pub max_sequences: u64,
    pub up_to_aut: bool,
    /// Extra lengths scanned by the conjecture hunter beyond the first.
    pub scan_extra: u32,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            search: SearchConfig::default(),
            max_sequences: DEFAULT_SEQUENCE_BUDGET,
            up_to_aut: true,
            scan_extra: 0,
        }
    }
}

impl VerifyBudget {
    fn expired(&self) -> bool {
        self.search.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn enumerator<'a>(&self, table: &'a GroupTable) -> SequenceEnumerator<'a> {
        if self.up_to_aut {
            SequenceEnumerator::new(table)
        } else {
            SequenceEnumerator::without_symmetry(table)
        }
    }
}

const ANCHOR_SHORT_ZSS: &str =
    "p-group with D(G) <= 2n - 1: every zero-sum S with |S| >= D(G) + 1 has a zero-sum T with 1 <= |T| <= n";
const ANCHOR_LONG_ZSS: &str = "p-group, 1 <= i <= 2n - D(G): every zero-sum S with |S| >= D(G) + i has a zero-sum T with i <= |T| <= n";
const ANCHOR_CHAIN: &str = "eta(G) = eta_1(G) < eta_2(G) < ... < eta_n(G) = s(G)";
const ANCHOR_HALF_RANGE: &str = "eta_i(G) = eta(G) + i - 1 for 2 <= i <= floor(n/2) + 1";
const ANCHOR_ETA_S: &str = "eta(G) = s(G) - exp(G) + 1";
const ANCHOR_CONJECTURE: &str = "p-group, D(G) <= 2n - 1, 1 <= l <= D(G) + 1 - n: every S with |S| >= D(G) + n - 2 + l has a zero-sum B with |B| = n, or a zero-sum B with |B| = 2n containing a zero-sum B' with |B'| in [2n - 1 - D(G) + l, n - 1]";
const ANCHOR_D_STAR: &str = "D*(G) <= D(G)";
const ANCHOR_ETA_EGZ: &str = "eta(G) + exp(G) - 1 <= s(G)";

fn table_for(group: &AbelianGroup) -> Option<GroupTable> {
    GroupTable::new(group).ok()
}

fn large_exponent_p_group(group: &AbelianGroup) -> Result<u64, String> {
    match group.p_group_prime() {
        None => Err(format!("{group} is not a p-group")),
        Some(_) if !large_exponent(group) => Err(format!(
            "D = {} exceeds 2n - 1 = {}",
            d_star(group),
            2 * group.exponent() - 1
        )),
        Some(p) => Ok(p),
    }
}

/// For each `i` in `[1, i_max]`, every zero-sum sequence of length `D + i`
/// has a zero-sum subsequence with length in `[i, n]`.
pub fn check_short_zss_containment(group: &AbelianGroup, i_max: u32, budget: &VerifyBudget) -> Vec<Entry> {
    if let Err(why) = large_exponent_p_group(group) {
        return vec![Entry::new("short-zss", ANCHOR_SHORT_ZSS, Status::Inapplicable, why)];
    }
    let d = d_star(group);
    let n = group.exponent();
    let top = 2 * n - d;
    if i_max < 1 || i_max as u64 > top {
        return vec![Entry::new(
            "short-zss",
            ANCHOR_SHORT_ZSS,
            Status::Inapplicable,
            format!("i_max = {i_max} outside [1, {top}]"),
        )];
    }
    let Some(table) = table_for(group) else {
        return vec![Entry::new("short-zss", ANCHOR_SHORT_ZSS, Status::Capped, "group too large to tabulate")];
    };
    let enumerator = budget.enumerator(&table);
    (1..=i_max)
        .map(|i| {
            let (check, anchor) = if i == 1 {
                ("short-zss i=1".to_string(), ANCHOR_SHORT_ZSS)
            } else {
                (format!("long-zss i={i}"), ANCHOR_LONG_ZSS)
            };
            let len = (d + i as u64) as usize;
            if budget.expired() {
                return Entry::new(check, anchor, Status::Capped, "deadline passed before enumeration");
            }
            let spec = LengthSpec::Range(i, n as u32);
            let found = enumerator.scan(len, true, budget.up_to_aut, budget.max_sequences, &|| budget.expired(), |v| {
                let s = Sequence::from_indices(group, v.iter().copied()).expect("valid indices");
                !has_zero_sum_in(&table, &s, &spec).expect("short sequence")
            });
            let scope = format!(
                "sampled length {len} only; {} zero-sum sequences{}",
                found.checked,
                if budget.up_to_aut && enumerator.has_symmetry() { " up to automorphism" } else { "" }
            );
            match classify(&found) {
                Scan::Found(v) => {
                    let s = Sequence::from_indices(group, v).expect("valid indices");
                    Entry::new(check, anchor, Status::Fail, format!("{s} has no zero-sum of length in [{i}, {n}]"))
                        .with_counterexample(&s)
                }
                Scan::Expired => Entry::new(check, anchor, Status::Capped, format!("deadline passed; {scope}")),
                Scan::Budget => Entry::new(
                    check,
                    anchor,
                    Status::Capped,
                    format!("enumeration budget reached, coverage {:.3}; {scope}", found.coverage()),
                ),
                Scan::Clean => Entry::new(check, anchor, Status::Pass, scope),
            }
        })
        .collect()
}

enum Scan {
    Clean,
    Found(Vec<u32>),
    Expired,
    Budget,
}

fn classify(out: &ScanOutcome) -> Scan {
    match (&out.failure, out.stopped) {
        (Some(v), _) => Scan::Found(v.clone()),
        (None, true) => Scan::Expired,
        (None, false) if out.walked < out.total => Scan::Budget,
        _ => Scan::Clean,
    }
}

/// Memoized searches for one verification run.
struct Searches<'a> {
    budget: &'a VerifyBudget,
    memo: HashMap<(AbelianGroup, LengthSpec), Result<InvariantResult, String>>,
}

impl<'a> Searches<'a> {
    fn new(budget: &'a VerifyBudget) -> Self {
        Searches {
            budget,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, group: &AbelianGroup, spec: LengthSpec) -> Result<InvariantResult, String> {
        self.memo
            .entry((group.clone(), spec))
            .or_insert_with(|| s_l(group, &spec, &self.budget.search).map_err(|e| e.to_string()))
            .clone()
    }

    /// The value, if the search finished.
    fn exact(&mut self, group: &AbelianGroup, spec: LengthSpec) -> Option<u64> {
        self.get(group, spec).ok().filter(|r| r.exhaustive).map(|r| r.value)
    }
}

/// Compares a search result against an estimate. A longer avoider than the
/// estimate allows is a failure even if the search did not finish.
fn compare(check: String, anchor: &str, found: &Result<InvariantResult, String>, expected: Estimate) -> Entry {
    let r = match found {
        Err(e) => return Entry::new(check, anchor, Status::Capped, format!("search failed: {e}")),
        Ok(r) => r,
    };
    let want = match expected {
        Estimate::Exact(x) => format!("{x}"),
        Estimate::Interval { lo, hi: Some(hi) } => format!("[{lo}, {hi}]"),
        Estimate::Interval { lo, hi: None } => format!(">= {lo}"),
    };
    let above = match expected {
        Estimate::Exact(x) => r.value > x,
        Estimate::Interval { hi, .. } => hi.is_some_and(|h| r.value > h),
    };
    if above {
        return Entry::new(
            check,
            anchor,
            Status::Fail,
            format!("search value {} (certificate of length {}), expected {want}", r.value, r.certificate.len()),
        )
        .with_counterexample(&r.certificate);
    }
    if !r.exhaustive {
        return Entry::new(
            check,
            anchor,
            Status::Capped,
            format!("search {:?}, lower bound {}, expected {want}", r.completion, r.value),
        );
    }
    if expected.contains(r.value) {
        Entry::new(check, anchor, Status::Pass, format!("search {} = expected {want}", r.value))
    } else {
        Entry::new(
            check,
            anchor,
            Status::Fail,
            format!("search {} below expected {want}; certificate is the longest avoider", r.value),
        )
        .with_counterexample(&r.certificate)
    }
}

fn quantity_spec(q: Quantity, n: u64) -> LengthSpec {
    let n = n as u32;
    match q {
        Quantity::Davenport => LengthSpec::All,
        Quantity::Eta => LengthSpec::Range(1, n),
        Quantity::Egz => LengthSpec::Exact(n),
        Quantity::Multiples => LengthSpec::Multiples,
        Quantity::Zeta(i) => LengthSpec::ResidueUpFrom(i),
        Quantity::EtaI(i) => LengthSpec::Range(i, n),
    }
}

fn quantity_label(q: Quantity) -> String {
    match q {
        Quantity::Davenport => "D".into(),
        Quantity::Eta => "eta".into(),
        Quantity::Egz => "s".into(),
        Quantity::Multiples => "s_nN".into(),
        Quantity::Zeta(i) => format!("zeta_{i}"),
        Quantity::EtaI(i) => format!("eta_{i}"),
    }
}

fn formula_entry(group: &AbelianGroup, f: &FormulaValue, searches: &mut Searches) -> Entry {
    let check = format!("{} search vs {}", quantity_label(f.quantity), f.name);
    match f.value {
        None => Entry::new(check, &f.reason, Status::Inapplicable, f.reason.clone()),
        Some(est) => {
            let found = searches.get(group, quantity_spec(f.quantity, group.exponent()));
            compare(check, &f.reason, &found, est)
        }
    }
}

/// Searches `η_i` for every `i` in `[1, n]` and checks the strict chain, the
/// half-range equality and, as an observation only, the full chain.
pub fn check_eta_chain(group: &AbelianGroup, budget: &VerifyBudget) -> Vec<Entry> {
    check_eta_chain_with(group, &mut Searches::new(budget))
}

fn check_eta_chain_with(group: &AbelianGroup, searches: &mut Searches) -> Vec<Entry> {
    let n = group.exponent() as u32;
    let etas: Vec<Result<InvariantResult, String>> =
        (1..=n).map(|i| searches.get(group, LengthSpec::Range(i, n))).collect();
    let s = searches.get(group, LengthSpec::Exact(n));
    let values: Option<Vec<u64>> = etas
        .iter()
        .map(|r| r.as_ref().ok().filter(|r| r.exhaustive).map(|r| r.value))
        .collect();
    let s_value = s.as_ref().ok().filter(|r| r.exhaustive).map(|r| r.value);
    let (Some(values), Some(s_value)) = (values, s_value) else {
        let msg = "some eta_i or s search did not finish";
        return vec![
            Entry::new("eta-chain", ANCHOR_CHAIN, Status::Capped, msg),
            Entry::new("eta-half-range", ANCHOR_HALF_RANGE, Status::Capped, msg),
            Entry::new("eta-full-chain", ANCHOR_ETA_S, Status::Capped, msg),
        ];
    };
    let listing = values.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    let mut out = Vec::new();

    let bad_step = values.windows(2).position(|w| w[0] >= w[1]);
    let chain = match (bad_step, *values.last().expect("n >= 1") == s_value) {
        (None, true) => Entry::new(
            "eta-chain",
            ANCHOR_CHAIN,
            Status::Pass,
            format!("eta_1..eta_{n} = {listing}; s = {s_value}"),
        ),
        (Some(k), _) => {
            let cert = etas[k + 1].as_ref().expect("finished").certificate.clone();
            Entry::new(
                "eta-chain",
                ANCHOR_CHAIN,
                Status::Fail,
                format!("eta_{} = {} is not below eta_{} = {}", k + 1, values[k], k + 2, values[k + 1]),
            )
            .with_counterexample(&cert)
        }
        (None, false) => {
            let cert = s.as_ref().expect("finished").certificate.clone();
            Entry::new(
                "eta-chain",
                ANCHOR_CHAIN,
                Status::Fail,
                format!("eta_{n} = {} differs from s = {s_value}", values[n as usize - 1]),
            )
            .with_counterexample(&cert)
        }
    };
    out.push(chain);

    let top = (n / 2 + 1).min(n);
    let half = if top < 2 {
        Entry::new("eta-half-range", ANCHOR_HALF_RANGE, Status::Inapplicable, "no i in [2, floor(n/2) + 1] up to n")
    } else {
        match (2..=top).find(|&i| values[i as usize - 1] != values[0] + i as u64 - 1) {
            None => Entry::new(
                "eta-half-range",
                ANCHOR_HALF_RANGE,
                Status::Pass,
                format!("eta_i = {} + i - 1 for 2 <= i <= {top}", values[0]),
            ),
            Some(i) => {
                let cert = etas[i as usize - 1].as_ref().expect("finished").certificate.clone();
                Entry::new(
                    "eta-half-range",
                    ANCHOR_HALF_RANGE,
                    Status::Fail,
                    format!("eta_{i} = {}, expected {}", values[i as usize - 1], values[0] + i as u64 - 1),
                )
                .with_counterexample(&cert)
            }
        }
    };
    out.push(half);

    let breaks = (1..=n).find(|&i| values[i as usize - 1] != values[0] + i as u64 - 1);
    let observation = match breaks {
        None => "observation only: full chain eta_i = eta + i - 1 holds up to i = n".to_string(),
        Some(i) => format!("observation only: full chain breaks at i = {i}"),
    };
    out.push(Entry::new("eta-full-chain", ANCHOR_ETA_S, Status::Pass, observation));
    out
}

/// Whether `s` satisfies the conjectured disjunction for the given `D` and
/// `ell`: a zero-sum subsequence of length `n`, or a zero-sum subsequence of
/// length `2n` that contains a zero-sum subsequence with length in
/// `[2n - 1 - D + ell, n - 1]`.
pub fn conjecture_holds_for(table: &GroupTable, s: &Sequence, davenport: u64, ell: u64) -> bool {
    let n = table.group().exponent();
    if has_zero_sum_in(table, s, &LengthSpec::Exact(n as u32)).expect("length within cap") {
        return true;
    }
    let lo = (2 * n - 1 + ell).saturating_sub(davenport).max(1);
    let hi = n - 1;
    if lo > hi || (s.len() as u64) < 2 * n {
        return false;
    }
    let inner = LengthSpec::Range(lo as u32, hi as u32);
    let distinct: Vec<(u32, u32)> = s.distinct().collect();
    let mut chosen = Vec::with_capacity(2 * n as usize);
    let mut check = |b: &[u32]| {
        let seq = Sequence::from_indices(table.group(), b.iter().copied()).expect("valid indices");
        length_set(table, &seq)
            .expect("length within cap")
            .meets(&inner, n)
            .expect("valid range")
    };
    zero_sum_submultisets(table, &distinct, 0, 2 * n as usize, 0, &mut chosen, &mut check)
}

/// Walks sub-multisets of exactly `need` more elements drawn from
/// `distinct[at..]` and stops at the first zero-sum one accepted by `accept`.
fn zero_sum_submultisets(
    table: &GroupTable,
    distinct: &[(u32, u32)],
    at: usize,
    need: usize,
    sum: u32,
    chosen: &mut Vec<u32>,
    accept: &mut dyn FnMut(&[u32]) -> bool,
) -> bool {
    if need == 0 {
        return sum == 0 && accept(chosen);
    }
    let Some(&(g, count)) = distinct.get(at) else {
        return false;
    };
    let rest: usize = distinct[at + 1..].iter().map(|&(_, c)| c as usize).sum();
    let lo = need.saturating_sub(rest);
    let hi = need.min(count as usize);
    for k in (lo..=hi).rev() {
        let base = chosen.len();
        chosen.extend(std::iter::repeat(g).take(k));
        let s = table.add(sum, table.mul(k as u64, g));
        let hit = zero_sum_submultisets(table, distinct, at + 1, need - k, s, chosen, accept);
        chosen.truncate(base);
        if hit {
            return true;
        }
    }
    false
}

/// Scans sequences of length `D + n - 2 + ell`, then `scan_extra` longer
/// lengths, for a counterexample to the conjectured disjunction. Lengths are
/// scanned in increasing order, so a reported counterexample has the least
/// scanned length.
pub fn hunt_conjecture(group: &AbelianGroup, ell: u32, scan_extra: u32, budget: &VerifyBudget) -> Vec<Entry> {
    let check = format!("conjecture l={ell}");
    if let Err(why) = large_exponent_p_group(group) {
        return vec![Entry::new(check, ANCHOR_CONJECTURE, Status::Inapplicable, why)];
    }
    let d = d_star(group);
    let n = group.exponent();
    if ell < 1 || ell as u64 > d + 1 - n {
        return vec![Entry::new(
            check,
            ANCHOR_CONJECTURE,
            Status::Inapplicable,
            format!("l = {ell} outside [1, {}]", d + 1 - n),
        )];
    }
    let Some(table) = table_for(group) else {
        return vec![Entry::new(check, ANCHOR_CONJECTURE, Status::Capped, "group too large to tabulate")];
    };
    let enumerator = budget.enumerator(&table);
    let first = d + n - 2 + ell as u64;
    let mut scanned = Vec::new();
    for len in first..=first + scan_extra as u64 {
        if budget.expired() {
            return vec![Entry::new(
                check,
                ANCHOR_CONJECTURE,
                Status::Capped,
                format!("deadline passed before length {len}"),
            )];
        }
        let found = enumerator.scan(
            len as usize,
            false,
            budget.up_to_aut,
            budget.max_sequences,
            &|| budget.expired(),
            |v| {
                let s = Sequence::from_indices(group, v.iter().copied()).expect("valid indices");
                !conjecture_holds_for(&table, &s, d, ell as u64)
            },
        );
        match classify(&found) {
            Scan::Found(v) => {
                let s = Sequence::from_indices(group, v).expect("valid indices");
                return vec![Entry::new(
                    check,
                    ANCHOR_CONJECTURE,
                    Status::Fail,
                    format!("length {len}: {s} satisfies neither disjunct"),
                )
                .with_counterexample(&s)];
            }
            Scan::Expired => {
                return vec![Entry::new(
                    check,
                    ANCHOR_CONJECTURE,
                    Status::Capped,
                    format!("deadline passed while scanning length {len}"),
                )]
            }
            Scan::Budget => {
                return vec![Entry::new(
                    check,
                    ANCHOR_CONJECTURE,
                    Status::Capped,
                    format!(
                        "no counterexample in the first {} of {} multisets of length {len} (coverage {:.3})",
                        found.walked,
                        found.total,
                        found.coverage()
                    ),
                )]
            }
            Scan::Clean => scanned.push(format!("{len} ({} sequences)", found.checked)),
        }
    }
    vec![Entry::new(
        check,
        ANCHOR_CONJECTURE,
        Status::Pass,
        format!(
            "no counterexample at length{} {}",
            if scanned.len() == 1 { "" } else { "s" },
            scanned.join(", ")
        ),
    )]
}

fn smallest_prime(n: u64) -> Option<u64> {
    prime_power_decomposition(n).first().map(|&(p, _)| p)
}

/// Runs every check applicable to `group`. Entries come in a fixed order
/// that does not depend on scheduling.
pub fn verify_group(group: &AbelianGroup, budget: &VerifyBudget) -> Report {
    verify_group_seeded(group, budget, &[]).0
}

/// [`verify_group`] starting from already known search results (only
/// exhaustive ones are used). Also returns every search result it used,
/// sorted by group and length spec.
pub fn verify_group_seeded(
    group: &AbelianGroup,
    budget: &VerifyBudget,
    known: &[InvariantResult],
) -> (Report, Vec<InvariantResult>) {
    let mut searches = Searches::new(budget);
    for r in known.iter().filter(|r| r.exhaustive) {
        searches.memo.insert((r.group.clone(), r.spec), Ok(r.clone()));
    }
    let mut entries = Vec::new();
    let n = group.exponent();
    let n32 = n as u32;
    let dstar = d_star(group);

    // Davenport constant against D*.
    let dav = searches.get(group, LengthSpec::All);
    entries.push(compare(
        "D search vs D* lower bound".into(),
        ANCHOR_D_STAR,
        &dav,
        Estimate::Interval { lo: dstar, hi: None },
    ));

    // Rank at most two.
    match rank2_parameters(group) {
        Some((n1, n2)) => {
            let r2 = cf_rank2(n1, n2).expect("invariant factors divide");
            let anchor_eta = "eta(C_n1 + C_n2) = 2n1 + n2 - 2 for n1 | n2";
            let anchor_s = "s(C_n1 + C_n2) = 2n1 + 2n2 - 3 for n1 | n2";
            let eta = searches.get(group, LengthSpec::Range(1, n32));
            entries.push(compare("eta search vs rank-2".into(), anchor_eta, &eta, Estimate::Exact(r2.eta)));
            let s = searches.get(group, LengthSpec::Exact(n32));
            entries.push(compare("s search vs rank-2".into(), anchor_s, &s, Estimate::Exact(r2.s)));
        }
        None => entries.push(Entry::new(
            "rank-2 formulas",
            "eta and s of C_n1 + C_n2",
            Status::Inapplicable,
            format!("rank {} exceeds 2", group.rank()),
        )),
    }

    // p-group formulas.
    match group.p_group_prime().map(|p| cf_pgroup(group, p)) {
        Some(Ok(forms)) => {
            entries.push(formula_entry(group, &forms.davenport, &mut searches));
            entries.push(formula_entry(group, &forms.multiples, &mut searches));
            for f in &forms.zeta {
                entries.push(formula_entry(group, f, &mut searches));
            }
            entries.push(formula_entry(group, &forms.eta, &mut searches));
            for f in &forms.eta_i {
                entries.push(formula_entry(group, f, &mut searches));
            }
        }
        Some(Err(e)) => entries.push(Entry::new("p-group formulas", "p-group values", Status::Inapplicable, e.0)),
        None => entries.push(Entry::new(
            "p-group formulas",
            "D, s_nN, zeta_i, eta and eta_i of p-groups",
            Status::Inapplicable,
            format!("{group} is not a p-group"),
        )),
    }

    // C_a + (large-exponent p-group) with p not dividing a.
    if group.p_group_prime().is_none() {
        match extension_split(group) {
            Some((p, a, sylow)) => match cf_extension(a, &sylow, p) {
                Ok(forms) => {
                    entries.push(formula_entry(group, &forms.davenport, &mut searches));
                    entries.push(formula_entry(group, &forms.eta, &mut searches));
                }
                Err(e) => entries.push(Entry::new("extension formulas", "C_a + G", Status::Inapplicable, e.0)),
            },
            None => entries.push(Entry::new(
                "extension formulas",
                "D and eta of C_a + G, G a large-exponent p-group, p not dividing a",
                Status::Inapplicable,
                "no split into a cyclic part and a large-exponent Sylow subgroup",
            )),
        }
    }

    // Interval bounds on eta and s.
    let davenport = searches.exact(group, LengthSpec::All).unwrap_or(dstar);
    let p_group = group.p_group_prime();
    let large = p_group.is_some() && davenport < 2 * n;
    let complement = (!group.is_trivial()).then(|| {
        let h = AbelianGroup::new(&group.factors()[..group.rank() - 1]).expect("valid factors");
        ComplementData {
            davenport_h: d_star(&h),
            exp_h_divides_n: n % h.exponent() == 0,
        }
    });
    let quotient = smallest_prime(n).and_then(|p| {
        let h_factors: Vec<u64> = group.factors().iter().map(|f| f / p.min(*f)).filter(|&f| f > 1).collect();
        if h_factors.is_empty() {
            return None;
        }
        let h = AbelianGroup::new(&h_factors).ok()?;
        let q_factors: Vec<u64> = group.factors().iter().map(|_| p).collect();
        let q = AbelianGroup::new(&q_factors).ok()?;
        let eta_h = searches.exact(&h, LengthSpec::Range(1, h.exponent() as u32))?;
        let eta_q = searches.exact(&q, LengthSpec::Range(1, p as u32))?;
        Some(QuotientData {
            eta_h,
            eta_q,
            exp_q: p,
            exponent_splits: h.exponent() * p == n,
        })
    });
    let input = BoundsInput {
        davenport,
        exponent: n,
        order: Some(group.order()),
        odd_p_large_exponent: large,
        complement,
        quotient,
    };
    for f in bounds_eta(&input) {
        let mut e = formula_entry(group, &f, &mut searches);
        e.check = format!("bound {} ({})", f.name, quantity_label(f.quantity));
        if f.name == "odd-p-chain" && p_group == Some(2) {
            e.details = format!("p = 2 is outside the stated hypothesis; {}", e.details);
            if e.status == Status::Fail {
                e.status = Status::Inapplicable;
                e.counterexample = None;
            }
        }
        entries.push(e);
    }
    if !input.odd_p_large_exponent {
        entries.push(Entry::new(
            "bound odd-p-chain",
            "2D - 1 <= eta + n - 1 <= s <= D + 2n - 2",
            Status::Inapplicable,
            "needs a p-group with D <= 2n - 1",
        ));
    }
    if input.quotient.is_none() {
        entries.push(Entry::new(
            "bound inductive-upper-bound",
            "exp(G) = exp(H) exp(G/H): eta <= (eta(H) - 1) exp(G/H) + eta(G/H)",
            Status::Inapplicable,
            "pG is trivial or its searches did not finish",
        ));
    }
    entries.push(eta_egz_entry(group, &mut searches));

    // Enumeration checks.
    match large_exponent_p_group(group) {
        Ok(_) => {
            let i_max = (2 * n - dstar) as u32;
            entries.extend(check_short_zss_containment(group, i_max, budget));
        }
        Err(why) => entries.push(Entry::new("short-zss", ANCHOR_SHORT_ZSS, Status::Inapplicable, why)),
    }
    entries.extend(check_eta_chain_with(group, &mut searches));
    match large_exponent_p_group(group) {
        Ok(_) => {
            for ell in 1..=(dstar + 1 - n) as u32 {
                entries.extend(hunt_conjecture(group, ell, budget.scan_extra, budget));
            }
        }
        Err(why) => entries.push(Entry::new("conjecture", ANCHOR_CONJECTURE, Status::Inapplicable, why)),
    }

    let mut used: Vec<InvariantResult> = searches.memo.into_values().filter_map(Result::ok).collect();
    used.sort_by(|a, b| (&a.group, a.spec).cmp(&(&b.group, b.spec)));
    (
        Report {
            group: group.clone(),
            entries,
        },
        used,
    )
}

fn eta_egz_entry(group: &AbelianGroup, searches: &mut Searches) -> Entry {
    let n = group.exponent();
    let eta = searches.exact(group, LengthSpec::Range(1, n as u32));
    let s = searches.get(group, LengthSpec::Exact(n as u32));
    match (eta, &s) {
        (Some(eta), Ok(r)) if r.value >= eta + n - 1 => Entry::new(
            "eta-egz relation",
            ANCHOR_ETA_EGZ,
            if r.exhaustive { Status::Pass } else { Status::Capped },
            format!("eta = {eta}, s {} {}", if r.exhaustive { "=" } else { ">=" }, r.value),
        ),
        (Some(eta), Ok(r)) if r.exhaustive => Entry::new(
            "eta-egz relation",
            ANCHOR_ETA_EGZ,
            Status::Fail,
            format!("eta = {eta}, s = {}", r.value),
        )
        .with_counterexample(&r.certificate),
        _ => Entry::new("eta-egz relation", ANCHOR_ETA_EGZ, Status::Capped, "eta or s search did not finish"),
    }
}

/// Verifies several groups concurrently. Each group runs its searches on a
/// single thread; reports come back in input order.
pub fn verify_catalog(groups: &[AbelianGroup], budget: &VerifyBudget) -> Vec<Report> {
    let mut inner = budget.clone();
    inner.search.threads = 1;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || groups.par_iter().map(|g| verify_group(g, &inner)).collect();
        match rayon::ThreadPoolBuilder::new().num_threads(budget.search.threads).build() {
            Ok(pool) if budget.search.threads > 1 => pool.install(run),
            _ => groups.iter().map(|g| verify_group(g, &inner)).collect(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        groups.iter().map(|g| verify_group(g, &inner)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f).unwrap()
    }

    fn statuses(entries: &[Entry]) -> Vec<Status> {
        entries.iter().map(|e| e.status).collect()
    }

    #[test]
    fn short_zss_examples() {
        let b = VerifyBudget::default();
        assert_eq!(statuses(&check_short_zss_containment(&g(&[2, 4]), 3, &b)), vec![Status::Pass; 3]);
        assert_eq!(statuses(&check_short_zss_containment(&g(&[3]), 3, &b)), vec![Status::Pass; 3]);
        assert_eq!(
            statuses(&check_short_zss_containment(&g(&[3, 3, 3]), 1, &b)),
            vec![Status::Inapplicable]
        );
    }

    #[test]
    fn eta_chain_examples() {
        let b = VerifyBudget::default();
        for (f, want) in [(&[3u64, 3][..], "7, 8, 9"), (&[2, 2], "4, 5"), (&[4], "4, 5, 6, 7")] {
            let e = check_eta_chain(&g(f), &b);
            assert_eq!(e[0].status, Status::Pass, "{:?}", e[0]);
            assert!(e[0].details.contains(want), "{}", e[0].details);
            assert!(e[2].details.contains("holds"));
        }
    }

    #[test]
    fn hunt_examples() {
        let b = VerifyBudget::default();
        let e = hunt_conjecture(&g(&[2, 4]), 2, 0, &b);
        assert_eq!(e[0].status, Status::Pass);
        assert!(e[0].details.contains("no counterexample at length 9 "));
        let e = hunt_conjecture(&g(&[2, 4]), 1, 0, &b);
        assert!(e[0].details.contains("no counterexample at length 8 "));
        assert_eq!(e[0].status, Status::Pass);
        let e = hunt_conjecture(&g(&[3]), 1, 0, &b);
        assert_eq!(e[0].status, Status::Pass);
        assert!(e[0].details.contains("no counterexample at length 5 "));
        assert_eq!(hunt_conjecture(&g(&[2, 4]), 3, 0, &b)[0].status, Status::Inapplicable);
    }

    #[test]
    fn second_disjunct_is_reachable() {
        // C_4, D = 4, l = 1: range [4, 3] is empty, so only disjunct one counts.
        let grp = g(&[4]);
        let table = GroupTable::new(&grp).unwrap();
        let s = Sequence::from_indices(&grp, [0, 0, 0, 1, 1, 1]).unwrap();
        assert!(!conjecture_holds_for(&table, &s, 4, 1));
        // C_2 + C_4, D = 5, l = 1: range [3, 3].
        let grp = g(&[2, 4]);
        let table = GroupTable::new(&grp).unwrap();
        let seqs = SequenceEnumerator::new(&table).index_vectors(8, false, false, 1 << 20).unwrap();
        let second_only = seqs.iter().any(|v| {
            let s = Sequence::from_indices(&grp, v.iter().copied()).unwrap();
            !has_zero_sum_in(&table, &s, &LengthSpec::Exact(4)).unwrap() && conjecture_holds_for(&table, &s, 5, 1)
        });
        assert!(second_only);
    }

    #[test]
    fn verify_examples() {
        let b = VerifyBudget::default();
        for f in [&[2u64, 4][..], &[3, 3], &[6]] {
            let r = verify_group(&g(f), &b);
            assert!(!r.has_failures(), "{:#?}", r);
            assert!(!r.is_capped(), "{:#?}", r);
        }
        let c6 = verify_group(&g(&[6]), &b);
        let find = |check: &str| c6.entries.iter().find(|e| e.check == check).unwrap().status;
        assert_eq!(find("p-group formulas"), Status::Inapplicable);
        assert_eq!(find("eta search vs rank-2"), Status::Pass);
        assert_eq!(find("s search vs rank-2"), Status::Pass);
        let c33 = verify_group(&g(&[3, 3]), &b);
        let zeta2 = c33.entries.iter().find(|e| e.check == "zeta_2 search vs zeta-values").unwrap();
        assert_eq!(zeta2.status, Status::Pass);
        assert!(zeta2.details.contains('6'));
    }

    #[test]
    fn reports_do_not_depend_on_symmetry() {
        let on = VerifyBudget::default();
        let off = VerifyBudget {
            up_to_aut: false,
            search: SearchConfig::default().with_symmetry(false),
            ..VerifyBudget::default()
        };
        for f in [&[2u64, 4][..], &[3], &[2, 2, 2]] {
            let a = verify_group(&g(f), &on);
            let b = verify_group(&g(f), &off);
            assert_eq!(statuses(&a.entries), statuses(&b.entries));
        }
    }

    #[test]
    fn seeded_run_matches_fresh_run() {
        let b = VerifyBudget::default();
        let grp = g(&[2, 4]);
        let (fresh, used) = verify_group_seeded(&grp, &b, &[]);
        assert!(used.iter().any(|r| r.spec == LengthSpec::All && r.value == 5));
        let (again, reused) = verify_group_seeded(&grp, &b, &used);
        assert_eq!(fresh, again);
        assert_eq!(used, reused);
    }

    #[test]
    fn serialization_field_order() {
        let r = verify_group(&g(&[2]), &VerifyBudget::default());
        let json = serde_json::to_string(&r).unwrap();
        let check = json.find("\"check\"").unwrap();
        let anchor = json.find("\"anchor\"").unwrap();
        let status = json.find("\"status\"").unwrap();
        assert!(check < anchor && anchor < status);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
