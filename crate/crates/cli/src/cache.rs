//! On-disk cache of search results and verification reports.
//!
//! ```text
//! <root>/results/<group>__<spec>.json   one ResultRecord per search
//! <root>/reports/<group>.json           one Report per verified group
//! ```
//!
//! Only exhaustive results are stored. A record is used only if it parses,
//! matches its key and its certificate re-validates.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use zerosum::search::{InvariantResult, ResultRecord};
use zerosum::verifier::Report;
use zerosum::{AbelianGroup, LengthSpec};

pub struct Cache {
    root: PathBuf,
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

fn group_slug(group: &AbelianGroup) -> String {
    slug(&group.to_string())
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn result_path(&self, group: &AbelianGroup, spec: &LengthSpec) -> PathBuf {
        self.root
            .join("results")
            .join(format!("{}__{}.json", group_slug(group), slug(&spec.to_string())))
    }

    fn report_path(&self, group: &AbelianGroup) -> PathBuf {
        self.root.join("reports").join(format!("{}.json", group_slug(group)))
    }

    pub fn load_result(&self, group: &AbelianGroup, spec: &LengthSpec) -> Option<InvariantResult> {
        let rec: ResultRecord = read_json(&self.result_path(group, spec)).ok()?;
        let r = InvariantResult::from_record(&rec).ok()?;
        (r.group == *group && r.spec == *spec && r.exhaustive && r.certificate_is_valid()).then_some(r)
    }

    pub fn store_result(&self, r: &InvariantResult) -> Result<()> {
        if !r.exhaustive {
            return Ok(());
        }
        write_json(&self.result_path(&r.group, &r.spec), &r.to_record())
    }

    /// Every valid cached result, in file name order.
    pub fn all_results(&self) -> Vec<InvariantResult> {
        json_files(&self.root.join("results"))
            .into_iter()
            .filter_map(|p| read_json::<ResultRecord>(&p).ok())
            .filter_map(|rec| InvariantResult::from_record(&rec).ok())
            .filter(|r| r.exhaustive && r.certificate_is_valid())
            .collect()
    }

    pub fn store_report(&self, report: &Report) -> Result<()> {
        write_json(&self.report_path(&report.group), report)
    }

    /// Stored reports, sorted by group.
    pub fn reports(&self) -> Result<Vec<Report>> {
        let mut out = Vec::new();
        for p in json_files(&self.root.join("reports")) {
            out.push(read_json::<Report>(&p)?);
        }
        out.sort_by(|a, b| a.group.order().cmp(&b.group.order()).then_with(|| a.group.cmp(&b.group)));
        Ok(out)
    }
}

fn json_files(dir: &Path) -> Vec<PathBuf> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Vec::new();
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string_pretty(value)?).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
