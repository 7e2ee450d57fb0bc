mod cache;
mod render;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use zerosum::catalog::verification_catalog;
use zerosum::closed_forms::{d_star, large_exponent, predictions, Quantity};
use zerosum::search::{default_length_cap, s_l_capped, Invariant, InvariantResult, SearchConfig};
use zerosum::verifier::{
    check_eta_chain, check_short_zss_containment, hunt_conjecture, verify_group_seeded, Report, Status,
    VerifyBudget,
};
use zerosum::{AbelianGroup, LengthSpec};

use cache::Cache;
use render::{Cell, ComputeOutput, Format, Prediction, SummaryRow};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAPPED: u8 = 3;

#[derive(Parser)]
#[command(name = "zerosum", version, about = "Zero-sum invariants of finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one invariant by exhaustive search
    Compute(ComputeArgs),
    /// Run the verification checks on one group, or on the built-in catalog
    Verify(VerifyArgs),
    /// Scan for counterexamples to the long zero-sum conjecture
    Hunt(HuntArgs),
    /// Summarize the verification reports stored in the cache
    Report(ReportArgs),
}

#[derive(Args)]
struct Common {
    /// Worker threads
    #[arg(long, default_value_t = default_threads(), value_parser = parse_threads)]
    threads: usize,
    /// Wall-clock budget in seconds (per group for catalog runs)
    #[arg(long, value_parser = parse_budget)]
    budget: Option<f64>,
    /// Cache directory
    #[arg(long, env = "ZEROSUM_CACHE_DIR", default_value = ".zerosum-cache")]
    cache: PathBuf,
    /// Neither read nor write the cache
    #[arg(long)]
    no_cache: bool,
    /// Disable automorphism pruning in searches and enumerations
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct EnumerationArgs {
    /// Enumerate one sequence per automorphism orbit
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    up_to_aut: bool,
    /// Most multisets walked by one enumeration
    #[arg(long, default_value_t = zerosum::enumerate::DEFAULT_SEQUENCE_BUDGET)]
    max_sequences: u64,
    /// Extra lengths scanned by the conjecture hunter
    #[arg(long, default_value_t = 0)]
    scan_extra: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InvariantName {
    Davenport,
    Eta,
    Egz,
    Zeta,
    #[value(name = "eta_i")]
    EtaI,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["invariant", "spec"]))]
struct ComputeArgs {
    /// Invariant factors, e.g. 2,4
    #[arg(long, value_parser = parse_group)]
    group: AbelianGroup,
    #[arg(long, value_enum)]
    invariant: Option<InvariantName>,
    /// Index for zeta and eta_i
    #[arg(long = "i")]
    index: Option<u32>,
    /// Length set: all | exact:k | range:a,b | multiples | resup:i
    #[arg(long, value_parser = parse_spec)]
    spec: Option<LengthSpec>,
    /// Longest sequence the search considers
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Zss,
    Chain,
    Conjecture,
}

#[derive(Args)]
struct VerifyArgs {
    /// Group to verify; the built-in catalog when omitted
    #[arg(long, value_parser = parse_group)]
    group: Option<AbelianGroup>,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[command(flatten)]
    enumeration: EnumerationArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct HuntArgs {
    #[arg(long, value_parser = parse_group)]
    group: AbelianGroup,
    /// A single l; every valid l when omitted
    #[arg(long)]
    ell: Option<u32>,
    #[command(flatten)]
    enumeration: EnumerationArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    common: Common,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("{s:?} is not a positive integer")),
    }
}

fn parse_budget(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(b) if b > 0.0 && b.is_finite() => Ok(b),
        _ => Err(format!("{s:?} is not a positive number of seconds")),
    }
}

fn parse_group(s: &str) -> Result<AbelianGroup, String> {
    s.parse().map_err(|e: zerosum::GroupError| e.to_string())
}

fn parse_spec(s: &str) -> Result<LengthSpec, String> {
    s.parse().map_err(|e: zerosum::spec::SpecError| e.to_string())
}

impl Common {
    fn deadline(&self) -> Option<Instant> {
        self.budget.map(|b| Instant::now() + Duration::from_secs_f64(b))
    }

    fn search(&self) -> SearchConfig {
        SearchConfig::default()
            .with_threads(self.threads)
            .with_symmetry(!self.no_symmetry)
            .with_deadline(self.deadline())
    }

    fn cache(&self) -> Option<Cache> {
        (!self.no_cache).then(|| Cache::new(&self.cache))
    }
}

impl EnumerationArgs {
    fn budget(&self, common: &Common) -> VerifyBudget {
        VerifyBudget {
            search: common.search(),
            max_sequences: self.max_sequences,
            up_to_aut: self.up_to_aut && !common.no_symmetry,
            scan_extra: self.scan_extra,
        }
    }
}

/// An error that maps to the usage exit code.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::Compute(a) => compute(&a, &mut out),
        Command::Verify(a) => verify(&a, &mut out),
        Command::Hunt(a) => hunt(&a, &mut out),
        Command::Report(a) => report(&a, &mut out),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|c| match c.kind() {
                csv::ErrorKind::Io(io) => io.kind() == io::ErrorKind::BrokenPipe,
                _ => false,
            })
    })
}

fn compute_spec(a: &ComputeArgs) -> Result<LengthSpec> {
    let n = a.group.exponent();
    if let Some(spec) = a.spec {
        spec.validate(n).map_err(|e| Usage(e.to_string()))?;
        return Ok(spec);
    }
    let name = match a.invariant.expect("clap requires --invariant or --spec") {
        InvariantName::Davenport => "davenport",
        InvariantName::Eta => "eta",
        InvariantName::Egz => "egz",
        InvariantName::Zeta => "zeta",
        InvariantName::EtaI => "eta_i",
    };
    let inv = Invariant::from_name(name, a.index).map_err(|e| Usage(e.to_string()))?;
    Ok(inv.spec(n).map_err(|e| Usage(e.to_string()))?)
}

fn compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<u8> {
    let spec = compute_spec(a)?;
    let group = &a.group;
    let cache = a.common.cache();
    let cached = match (&cache, a.cap) {
        (Some(c), None) => c.load_result(group, &spec),
        _ => None,
    };
    let (result, source) = match cached {
        Some(r) => (r, "cache"),
        None => {
            let cap = a.cap.unwrap_or_else(|| default_length_cap(group, &spec));
            let r = s_l_capped(group, &spec, cap, &a.common.search())?;
            if let Some(c) = &cache {
                c.store_result(&r)?;
            }
            (r, "search")
        }
    };
    let preds: Vec<Prediction> = Quantity::from_spec(&spec, group.exponent())
        .map(|q| predictions(group, q))
        .unwrap_or_default()
        .iter()
        .filter_map(|f| Prediction::judge(f, &result))
        .collect();
    let output = ComputeOutput {
        result: result.to_record(),
        source: source.to_string(),
        predictions: preds,
    };
    render::compute(out, &output, &result.certificate.to_string(), a.common.format)?;
    Ok(if output.predictions.iter().any(|p| p.agrees == Some(false)) {
        EXIT_FAIL
    } else if !result.exhaustive {
        EXIT_CAPPED
    } else {
        0
    })
}

fn exit_code(reports: &[Report]) -> u8 {
    if reports.iter().any(Report::has_failures) {
        EXIT_FAIL
    } else if reports.iter().any(Report::is_capped) {
        EXIT_CAPPED
    } else {
        0
    }
}

fn run_suite(group: &AbelianGroup, suite: Suite, budget: &VerifyBudget, cache: Option<&Cache>) -> Result<Report> {
    let entries = match suite {
        Suite::All => {
            let known = cache.map(Cache::all_results).unwrap_or_default();
            let (report, used) = verify_group_seeded(group, budget, &known);
            if let Some(c) = cache {
                for r in used.iter().filter(|r| !known.contains(r)) {
                    c.store_result(r)?;
                }
                c.store_report(&report)?;
            }
            return Ok(report);
        }
        Suite::Zss => {
            let top = if group.p_group_prime().is_some() && large_exponent(group) {
                (2 * group.exponent() - d_star(group)) as u32
            } else {
                1
            };
            check_short_zss_containment(group, top, budget)
        }
        Suite::Chain => check_eta_chain(group, budget),
        Suite::Conjecture => hunt_all(group, None, budget),
    };
    Ok(Report {
        group: group.clone(),
        entries,
    })
}

fn hunt_all(group: &AbelianGroup, ell: Option<u32>, budget: &VerifyBudget) -> Vec<zerosum::verifier::Entry> {
    let top = (d_star(group) + 1).saturating_sub(group.exponent()).max(1) as u32;
    let ells: Vec<u32> = match ell {
        Some(l) => vec![l],
        None => (1..=top).collect(),
    };
    ells.into_iter()
        .flat_map(|l| hunt_conjecture(group, l, budget.scan_extra, budget))
        .collect()
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let cache = a.common.cache();
    let groups = match &a.group {
        Some(g) => vec![g.clone()],
        None => verification_catalog(),
    };
    let mut reports = Vec::new();
    for g in &groups {
        // a fresh budget per group, so the deadline restarts
        let budget = a.enumeration.budget(&a.common);
        reports.push(run_suite(g, a.suite, &budget, cache.as_ref()).with_context(|| format!("verifying {g}"))?);
    }
    render::reports(out, &reports, a.group.is_some(), a.common.format)?;
    Ok(exit_code(&reports))
}

fn hunt(a: &HuntArgs, out: &mut dyn Write) -> Result<u8> {
    let budget = a.enumeration.budget(&a.common);
    let report = Report {
        group: a.group.clone(),
        entries: hunt_all(&a.group, a.ell, &budget),
    };
    render::reports(out, std::slice::from_ref(&report), true, a.common.format)?;
    Ok(exit_code(std::slice::from_ref(&report)))
}

fn summary_cell(group: &AbelianGroup, spec: LengthSpec, q: Quantity, results: &[InvariantResult]) -> Option<Cell> {
    if let Some(r) = results.iter().find(|r| r.group == *group && r.spec == spec) {
        return Some(Cell {
            value: r.value,
            source: "search".into(),
        });
    }
    predictions(group, q)
        .iter()
        .find_map(|f| f.exact_value())
        .map(|value| Cell {
            value,
            source: "oracle".into(),
        })
}

fn report(a: &ReportArgs, out: &mut dyn Write) -> Result<u8> {
    let cache = Cache::new(&a.common.cache);
    let reports = cache.reports()?;
    let results = cache.all_results();
    let rows: Vec<SummaryRow> = reports
        .iter()
        .map(|r| {
            let g = &r.group;
            let n = g.exponent() as u32;
            SummaryRow {
                group: g.to_string(),
                davenport: summary_cell(g, LengthSpec::All, Quantity::Davenport, &results),
                eta: summary_cell(g, LengthSpec::Range(1, n), Quantity::Eta, &results),
                egz: summary_cell(g, LengthSpec::Exact(n), Quantity::Egz, &results),
                pass: r.count(Status::Pass),
                fail: r.count(Status::Fail),
                inapplicable: r.count(Status::Inapplicable),
                capped: r.count(Status::Capped),
            }
        })
        .collect();
    if rows.is_empty() {
        eprintln!("no reports under {}", cache.root().display());
    }
    render::summary(out, &rows, a.common.format)?;
    Ok(exit_code(&reports))
}
