//! Table, JSON and CSV rendering of command output.

use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use zerosum::closed_forms::{Estimate, FormulaValue};
use zerosum::search::{InvariantResult, ResultRecord};
use zerosum::verifier::{Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// A closed-form value shown next to a computed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub name: String,
    pub reason: String,
    pub value: Estimate,
    /// `None` while the search has not finished and the value is consistent.
    pub agrees: Option<bool>,
}

impl Prediction {
    pub fn judge(f: &FormulaValue, r: &InvariantResult) -> Option<Self> {
        let value = f.value?;
        let above = match value {
            Estimate::Exact(x) => r.value > x,
            Estimate::Interval { hi, .. } => hi.is_some_and(|h| r.value > h),
        };
        let agrees = if above {
            Some(false)
        } else if r.exhaustive {
            Some(value.contains(r.value))
        } else {
            None
        };
        Some(Prediction {
            name: f.name.clone(),
            reason: f.reason.clone(),
            value,
            agrees,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeOutput {
    pub result: ResultRecord,
    /// `search` or `cache`.
    pub source: String,
    pub predictions: Vec<Prediction>,
}

fn estimate(e: &Estimate) -> String {
    match e {
        Estimate::Exact(x) => x.to_string(),
        Estimate::Interval { lo, hi: Some(hi) } => format!("[{lo}, {hi}]"),
        Estimate::Interval { lo, hi: None } => format!(">= {lo}"),
    }
}

fn verdict(agrees: Option<bool>) -> &'static str {
    match agrees {
        Some(true) => "agrees",
        Some(false) => "DISAGREES",
        None => "pending",
    }
}

pub fn compute(out: &mut dyn Write, c: &ComputeOutput, certificate: &str, format: Format) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(c)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["group", "spec", "value", "exhaustive", "completion", "source", "certificate", "oracle"])?;
            let oracle = c
                .predictions
                .iter()
                .map(|p| format!("{}={}", p.name, estimate(&p.value)))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                c.result.group.as_str(),
                c.result.spec.as_str(),
                &c.result.value.to_string(),
                &c.result.exhaustive.to_string(),
                &format!("{:?}", c.result.completion),
                &c.source,
                certificate,
                &oracle,
            ])?;
            w.flush()?;
        }
        Format::Table => {
            let r = &c.result;
            let status = if r.exhaustive {
                "exhaustive".to_string()
            } else {
                format!("{:?} (value is a lower bound)", r.completion)
            };
            writeln!(out, "{:<12} {}", "group", r.group)?;
            writeln!(out, "{:<12} {}", "spec", r.spec)?;
            writeln!(out, "{:<12} {}", "value", r.value)?;
            writeln!(out, "{:<12} {}", "status", status)?;
            writeln!(out, "{:<12} {}", "source", c.source)?;
            writeln!(out, "{:<12} {}", "certificate", certificate)?;
            writeln!(out, "{:<12} {} nodes, {} ms", "search", r.stats.nodes, r.stats.elapsed_ms)?;
            if c.predictions.is_empty() {
                writeln!(out, "{:<12} none applicable", "oracle")?;
            }
            for p in &c.predictions {
                writeln!(
                    out,
                    "{:<12} {}: {} = {} [{}]",
                    "oracle",
                    p.name,
                    p.reason,
                    estimate(&p.value),
                    verdict(p.agrees)
                )?;
            }
        }
    }
    Ok(())
}

pub fn reports(out: &mut dyn Write, reports: &[Report], single: bool, format: Format) -> Result<()> {
    match format {
        Format::Json if single && reports.len() == 1 => {
            writeln!(out, "{}", serde_json::to_string_pretty(&reports[0])?)?
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(reports)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["group", "check", "status", "anchor", "details", "counterexample"])?;
            for r in reports {
                for e in &r.entries {
                    let cx = match &e.counterexample {
                        Some(c) => serde_json::to_string(c)?,
                        None => String::new(),
                    };
                    w.write_record([
                        &r.group.to_string(),
                        &e.check,
                        &e.status.to_string(),
                        &e.anchor,
                        &e.details,
                        &cx,
                    ])?;
                }
            }
            w.flush()?;
        }
        Format::Table => {
            for r in reports {
                writeln!(out, "== {} ==", r.group)?;
                let width = r.entries.iter().map(|e| e.check.len()).max().unwrap_or(0);
                for e in &r.entries {
                    writeln!(out, "{:<12} {:<width$}  {}", e.status.to_string(), e.check, e.details)?;
                    if let Some(cx) = &e.counterexample {
                        writeln!(out, "{:<12} {:<width$}  counterexample {}", "", "", serde_json::to_string(cx)?)?;
                    }
                }
                writeln!(
                    out,
                    "{} pass, {} fail, {} inapplicable, {} capped",
                    r.count(Status::Pass),
                    r.count(Status::Fail),
                    r.count(Status::Inapplicable),
                    r.count(Status::Capped)
                )?;
            }
        }
    }
    Ok(())
}

/// One line of the `report` summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub davenport: Option<Cell>,
    pub eta: Option<Cell>,
    pub egz: Option<Cell>,
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub capped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub value: u64,
    /// `search` or `oracle`.
    pub source: String,
}

pub fn summary(out: &mut dyn Write, rows: &[SummaryRow], format: Format) -> Result<()> {
    let cell = |c: &Option<Cell>| match c {
        Some(c) if c.source == "search" => c.value.to_string(),
        Some(c) => format!("{}*", c.value),
        None => "-".to_string(),
    };
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(rows)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["group", "D", "eta", "s", "pass", "fail", "inapplicable", "capped"])?;
            for r in rows {
                w.write_record([
                    r.group.clone(),
                    cell(&r.davenport),
                    cell(&r.eta),
                    cell(&r.egz),
                    r.pass.to_string(),
                    r.fail.to_string(),
                    r.inapplicable.to_string(),
                    r.capped.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Table => {
            writeln!(
                out,
                "{:<14} {:>5} {:>5} {:>5} {:>6} {:>6} {:>6} {:>6}",
                "group", "D", "eta", "s", "pass", "fail", "inap", "capped"
            )?;
            for r in rows {
                writeln!(
                    out,
                    "{:<14} {:>5} {:>5} {:>5} {:>6} {:>6} {:>6} {:>6}",
                    r.group,
                    cell(&r.davenport),
                    cell(&r.eta),
                    cell(&r.egz),
                    r.pass,
                    r.fail,
                    r.inapplicable,
                    r.capped
                )?;
            }
            writeln!(out, "values marked * come from closed forms, not search")?;
        }
    }
    Ok(())
}
