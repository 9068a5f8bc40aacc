//! Run manifests and the consolidated findings document.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::checks::{Check, Finding, Verification};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Everything that determines a run's output.
///
/// The timestamp is taken from `SOURCE_DATE_EPOCH` when set and omitted
/// otherwise, so reruns of the same manifest produce identical bytes.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub selector: String,
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, selector: &str) -> Self {
        RunManifest {
            command: command.into(),
            selector: selector.into(),
            params: BTreeMap::new(),
            seed: None,
            tool_version: TOOL_VERSION.into(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
        }
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.insert(name.into(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Located<T> {
    pub selector: String,
    #[serde(flatten)]
    pub item: T,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub manifest: RunManifest,
    /// Exact identities with a nonzero residual. Any entry makes the run fail.
    pub exact_failures: Vec<Located<Check>>,
    /// Published forms that differ from the derived ones.
    pub discrepancies: Vec<Located<Finding>>,
    /// Published forms reproduced exactly.
    pub confirmed: Vec<Located<Finding>>,
    pub checks_run: usize,
    pub sections: Vec<Verification>,
}

impl Report {
    pub fn new(manifest: RunManifest, sections: Vec<Verification>) -> Self {
        let mut exact_failures = Vec::new();
        let mut discrepancies = Vec::new();
        let mut confirmed = Vec::new();
        let mut checks_run = 0;
        for v in &sections {
            checks_run += v.checks.len();
            for c in v.checks.iter().filter(|c| !c.passed) {
                exact_failures.push(Located { selector: v.selector.clone(), item: c.clone() });
            }
            for f in &v.findings {
                let l = Located { selector: v.selector.clone(), item: f.clone() };
                if f.matches {
                    confirmed.push(l);
                } else {
                    discrepancies.push(l);
                }
            }
        }
        Report { manifest, exact_failures, discrepancies, confirmed, checks_run, sections }
    }

    pub fn passed(&self) -> bool {
        self.exact_failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Verification report\n");
        let _ = writeln!(s, "- command: `{}`", self.manifest.command);
        let _ = writeln!(s, "- selector: `{}`", self.manifest.selector);
        let _ = writeln!(s, "- tool: {}", self.manifest.tool_version);
        if let Some(t) = &self.manifest.timestamp {
            let _ = writeln!(s, "- timestamp: {t}");
        }
        let _ = writeln!(
            s,
            "- exact checks: {} run, {} failed\n- published forms: {} confirmed, {} differ\n",
            self.checks_run,
            self.exact_failures.len(),
            self.confirmed.len(),
            self.discrepancies.len()
        );
        let _ = writeln!(s, "## Exact failures\n");
        if self.exact_failures.is_empty() {
            let _ = writeln!(s, "None.\n");
        }
        for f in &self.exact_failures {
            let _ = writeln!(s, "- **{}**: {} ({})", f.selector, f.item.name, f.item.detail);
        }
        for (title, list) in [("Discrepancies with published forms", &self.discrepancies), ("Confirmed published forms", &self.confirmed)] {
            let _ = writeln!(s, "\n## {title}\n");
            let _ = writeln!(s, "| selector | topic | item | published | derived |");
            let _ = writeln!(s, "|---|---|---|---|---|");
            for f in list {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | `{}` | `{}` |",
                    f.selector,
                    f.item.topic,
                    f.item.item,
                    cell(&f.item.printed),
                    cell(&f.item.derived)
                );
            }
        }
        s
    }
}

fn cell(s: &str) -> String {
    const MAX: usize = 160;
    let t = s.replace('|', "\\|");
    if t.chars().count() > MAX {
        let cut: String = t.chars().take(MAX).collect();
        format!("{cut} …")
    } else {
        t
    }
}
