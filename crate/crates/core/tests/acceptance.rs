//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zerosum::catalog::abelian_p_groups;
use zerosum::closed_forms::{cf_extension, cf_rank2};
use zerosum::oracle::naive_length_set;
use zerosum::search::{named_invariant, s_l, ResultRecord};
use zerosum::verifier::{check_eta_chain, check_short_zss_containment, hunt_conjecture, Entry, Status, VerifyBudget};
use zerosum::{d_star, length_set, AbelianGroup, GroupTable, Invariant, InvariantResult, SearchConfig, Sequence};

type Outcome = Result<String, String>;

fn g(f: &[u64]) -> AbelianGroup {
    AbelianGroup::new(f).unwrap()
}

fn search(group: &AbelianGroup, inv: Invariant, cfg: &SearchConfig) -> Result<InvariantResult, String> {
    named_invariant(group, inv, cfg).map_err(|e| format!("{group} {}: {e}", inv.name()))
}

fn exact(group: &AbelianGroup, inv: Invariant, cfg: &SearchConfig) -> Result<u64, String> {
    let r = search(group, inv, cfg)?;
    if !r.certificate_is_valid() {
        return Err(format!("{group} {}: certificate does not re-validate", inv.name()));
    }
    if !r.exhaustive {
        return Err(format!("{group} {}: search capped at {}", inv.name(), r.value));
    }
    Ok(r.value)
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn all_pass(entries: &[Entry]) -> Result<(), String> {
    match entries.iter().find(|e| e.status != Status::Pass) {
        Some(e) => Err(format!("{} is {}: {}", e.check, e.status, e.details)),
        None if entries.is_empty() => Err("no entries".into()),
        None => Ok(()),
    }
}

fn criterion_1(cfg: &SearchConfig) -> Outcome {
    let start = Instant::now();
    let groups = abelian_p_groups(32);
    for group in &groups {
        let d = exact(group, Invariant::Davenport, cfg)?;
        if d != d_star(group) {
            return Err(format!("D({group}) = {d}, D* = {}", d_star(group)));
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} p-groups, {:?}", groups.len(), start.elapsed()))
}

fn criterion_2(cfg: &SearchConfig) -> Outcome {
    let start = Instant::now();
    let cases: [(&[u64], (u64, u64)); 5] = [
        (&[2, 2], (4, 5)),
        (&[3, 3], (7, 9)),
        (&[2, 4], (6, 9)),
        (&[5], (5, 9)),
        (&[6], (6, 11)),
    ];
    for (f, want) in cases {
        let group = g(f);
        let (n1, n2) = if f.len() == 2 { (f[0], f[1]) } else { (1, f[0]) };
        let formula = cf_rank2(n1, n2).map_err(|e| e.0)?;
        if (formula.eta, formula.s) != want {
            return Err(format!("formula for {group} gives ({}, {})", formula.eta, formula.s));
        }
        let got = (exact(&group, Invariant::Eta, cfg)?, exact(&group, Invariant::Egz, cfg)?);
        if got != want {
            return Err(format!("{group}: (eta, s) = {got:?}, expected {want:?}"));
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("5 groups, {:?}", start.elapsed()))
}

fn criterion_3(cfg: &SearchConfig) -> Outcome {
    let mut checked = 0;
    for f in [&[3u64][..], &[4], &[9], &[2, 4], &[3, 3]] {
        let group = g(f);
        let d = exact(&group, Invariant::Davenport, cfg)?;
        for i in 1..=group.exponent() as u32 {
            let z = exact(&group, Invariant::Zeta(i), cfg)?;
            if z != d + i as u64 - 1 {
                return Err(format!("zeta_{i}({group}) = {z}, D + i - 1 = {}", d + i as u64 - 1));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} values"))
}

fn criterion_4(cfg: &SearchConfig) -> Outcome {
    let mut notes = Vec::new();
    for (f, want) in [(&[2u64, 4][..], 6), (&[2, 2, 4], 8), (&[9], 9)] {
        let group = g(f);
        let d = exact(&group, Invariant::Davenport, cfg)?;
        let eta = exact(&group, Invariant::Eta, cfg)?;
        if eta != want || eta != 2 * d - group.exponent() {
            return Err(format!("eta({group}) = {eta}, D = {d}, expected {want}"));
        }
    }
    let group = g(&[3, 9]);
    let extended = SearchConfig {
        deadline: Some(Instant::now() + Duration::from_secs(600)),
        ..cfg.clone()
    };
    let r = search(&group, Invariant::Eta, &extended)?;
    let d = exact(&group, Invariant::Davenport, cfg)?;
    if !r.certificate_is_valid() || r.value > 13 || (r.exhaustive && r.value != 2 * d - 9) {
        return Err(format!("eta(C_3 + C_9) = {} (exhaustive: {})", r.value, r.exhaustive));
    }
    if !r.exhaustive {
        notes.push(format!("C_3 + C_9 capped at {}", r.value));
    }
    Ok(if notes.is_empty() {
        "all four exhaustive".into()
    } else {
        notes.join("; ")
    })
}

fn criterion_5() -> Outcome {
    let ext = cf_extension(3, &g(&[2, 4]), 2).map_err(|e| e.0)?;
    let eta = ext.eta.exact_value().ok_or("extension eta not applicable")?;
    let rank2 = cf_rank2(2, 12).map_err(|e| e.0)?.eta;
    if ext.group != g(&[2, 12]) || eta != 14 || rank2 != 14 {
        return Err(format!("extension group {}, eta {eta}; rank-2 eta {rank2}", ext.group));
    }
    let cfg = SearchConfig::default().with_deadline(Some(Instant::now() + Duration::from_secs(60)));
    let r = search(&ext.group, Invariant::Eta, &cfg)?;
    if r.value > 14 || (r.exhaustive && r.value != 14) {
        return Err(format!("search on C_2 + C_12 gives {}", r.value));
    }
    Ok(format!(
        "both forms give 14; search {} ({})",
        r.value,
        if r.exhaustive { "exhaustive" } else { "capped" }
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let budget = VerifyBudget::default();
    all_pass(&check_short_zss_containment(&g(&[2, 4]), 3, &budget))?;
    all_pass(&check_short_zss_containment(&g(&[3]), 3, &budget))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("{:?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let budget = VerifyBudget::default();
    for (f, ell) in [(&[2u64, 4][..], 1), (&[2, 4], 2), (&[3], 1)] {
        let entries = hunt_conjecture(&g(f), ell, 0, &budget);
        all_pass(&entries).map_err(|e| format!("{} l={ell}: {e}", g(f)))?;
    }
    Ok("no counterexamples".into())
}

fn criterion_8() -> Outcome {
    let budget = VerifyBudget::default();
    let mut observed = Vec::new();
    for f in [&[2u64, 2][..], &[4], &[3, 3]] {
        let group = g(f);
        let entries = check_eta_chain(&group, &budget);
        let find = |name: &str| entries.iter().find(|e| e.check == name).ok_or(format!("{group}: no {name} entry"));
        for name in ["eta-chain", "eta-half-range"] {
            let e = find(name)?;
            if e.status != Status::Pass {
                return Err(format!("{group} {name} is {}: {}", e.status, e.details));
            }
        }
        observed.push(format!("{group}: {}", find("eta-full-chain")?.details));
    }
    Ok(observed.join("; "))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let groups: Vec<AbelianGroup> = (1..=16u64)
        .flat_map(|o| abelian_groups_of_order(o))
        .collect();
    let mut mismatches = 0;
    for _ in 0..1000 {
        let group = &groups[rng.gen_range(0..groups.len())];
        let table = GroupTable::new(group).unwrap();
        let len = rng.gen_range(0..=12);
        let idx: Vec<u32> = (0..len).map(|_| rng.gen_range(0..group.order() as u32)).collect();
        let s = Sequence::from_indices(group, idx).unwrap();
        if length_set(&table, &s).unwrap().lengths() != naive_length_set(&table, &s) {
            mismatches += 1;
        }
    }
    if mismatches > 0 {
        return Err(format!("{mismatches} mismatches"));
    }
    Ok(format!("1000 sequences over {} groups, 0 mismatches", groups.len()))
}

/// Invariant factor lists of every abelian group of the given order.
fn abelian_groups_of_order(order: u64) -> Vec<AbelianGroup> {
    fn rec(rest: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<AbelianGroup>) {
        if rest == 1 {
            out.push(AbelianGroup::new(cur).unwrap());
            return;
        }
        let last = cur.last().copied().unwrap_or(1);
        for d in (min.max(2)..=rest).filter(|d| rest % d == 0 && d % last == 0) {
            cur.push(d);
            rec(rest / d, d, cur, out);
            cur.pop();
        }
    }
    if order == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(order, 2, &mut Vec::new(), &mut out);
    out
}

/// Values and certificates of the searches behind criteria 1 to 4.
fn fingerprint(threads: usize) -> Result<Vec<ResultRecord>, String> {
    let cfg = SearchConfig::default().with_threads(threads);
    let mut runs: Vec<(AbelianGroup, Invariant)> = abelian_p_groups(32)
        .into_iter()
        .map(|grp| (grp, Invariant::Davenport))
        .collect();
    for f in [&[2u64, 2][..], &[3, 3], &[2, 4], &[5], &[6], &[2, 2, 4], &[9], &[3, 9]] {
        runs.push((g(f), Invariant::Eta));
        runs.push((g(f), Invariant::Egz));
    }
    for f in [&[3u64][..], &[4], &[9], &[2, 4], &[3, 3]] {
        for i in 1..=g(f).exponent() as u32 {
            runs.push((g(f), Invariant::Zeta(i)));
        }
    }
    runs.iter()
        .map(|(grp, inv)| {
            let spec = inv.spec(grp.exponent()).unwrap();
            let mut rec = s_l(grp, &spec, &cfg).map_err(|e| e.to_string())?.to_record();
            rec.stats = Default::default();
            Ok(rec)
        })
        .collect()
}

fn criterion_10() -> Outcome {
    let one = serde_json::to_string(&fingerprint(1)?).unwrap();
    for threads in [2, 8] {
        if serde_json::to_string(&fingerprint(threads)?).unwrap() != one {
            return Err(format!("{threads} workers differ from 1 worker"));
        }
    }
    Ok(format!("{} bytes identical at 1, 2, 8 workers", one.len()))
}

fn main() {
    let cfg = SearchConfig::default();
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(|| criterion_1(&cfg))),
        (2, Box::new(|| criterion_2(&cfg))),
        (3, Box::new(|| criterion_3(&cfg))),
        (4, Box::new(|| criterion_4(&cfg))),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (n, run) in &criteria {
        match run() {
            Ok(note) => println!("criterion {n}: PASS ({note})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
