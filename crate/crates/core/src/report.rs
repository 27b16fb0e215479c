//! Verification reports shared by every `verify` command.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// One row of a dimension table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub k: i32,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    #[serde(rename = "dimH")]
    pub dim_h: Option<usize>,
    #[serde(rename = "dimDH")]
    pub dim_dh: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    /// Rows of the Gram matrix of ω as `p/q` strings.
    pub omega: Vec<Vec<String>>,
    pub layers: Vec<Layer>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Report {
    pub fn new(n: usize, omega: Vec<Vec<String>>) -> Self {
        Report { n, omega, layers: Vec::new(), checks: Vec::new(), seed: None, samples: None }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        pass
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }

    pub fn sort_layers(&mut self) {
        self.layers.sort_by_key(|l| l.k);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        if !self.omega.is_empty() {
            let _ = writeln!(out, "omega = [{}]", self.omega.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("; "));
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed = {seed}");
        }
        if let Some(samples) = self.samples {
            let _ = writeln!(out, "samples = {samples}");
        }
        if !self.layers.is_empty() {
            out.push_str(&layer_table(&self.layers));
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "[{tag}] {}", c.name);
            } else {
                let _ = writeln!(out, "[{tag}] {}: {}", c.name, c.detail);
            }
        }
        let total = self.checks.len();
        let failed = self.failures().count();
        let _ = writeln!(out, "{} of {} checks passed", total - failed, total);
        out
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "-".to_string(), |d| d.to_string())
}

/// Right-aligned table of layer dimensions with a totals row.
pub fn layer_table(layers: &[Layer]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>4} {:>8} {:>8} {:>8}", "k", "dimW", "dimH", "dimDH");
    for l in layers {
        let _ = writeln!(out, "{:>4} {:>8} {:>8} {:>8}", l.k, l.dim_w, opt(l.dim_h), opt(l.dim_dh));
    }
    let sum = |f: fn(&Layer) -> Option<usize>| -> Option<usize> { layers.iter().map(f).sum() };
    let _ = writeln!(
        out,
        "{:>4} {:>8} {:>8} {:>8}",
        "all",
        layers.iter().map(|l| l.dim_w).sum::<usize>(),
        opt(sum(|l| l.dim_h)),
        opt(sum(|l| l.dim_dh))
    );
    out
}

pub fn rational_rows(rows: impl IntoIterator<Item = Vec<Rational>>) -> Vec<Vec<String>> {
    rows.into_iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}
