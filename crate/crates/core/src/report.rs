//! Machine-readable results of checks, searches and suites.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ring::{Element, RingRecipe};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportWitness {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingRecipe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<Element>,
}

/// Wall-clock time is kept out of the structured form so that equal seeds
/// give byte-identical output; the text form prints it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub counters: BTreeMap<String, u64>,
    pub witnesses: Vec<ReportWitness>,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub elapsed_ms: u64,
    pub version: String,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            passed: true,
            counters: BTreeMap::new(),
            witnesses: Vec::new(),
            seed: None,
            elapsed_ms: 0,
            version: TOOL_VERSION.to_string(),
            notes: Vec::new(),
        }
    }

    pub fn count(&mut self, key: impl Into<String>, by: u64) {
        *self.counters.entry(key.into()).or_insert(0) += by;
    }

    pub fn set(&mut self, key: impl Into<String>, value: u64) {
        self.counters.insert(key.into(), value);
    }

    pub fn counter(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }

    /// Records a failed expectation; the report no longer passes.
    pub fn fail(&mut self, witness: ReportWitness) {
        self.passed = false;
        self.witnesses.push(witness);
    }

    /// Asserts a named condition, recording a bare witness when it fails.
    pub fn expect(&mut self, label: impl Into<String>, ok: bool) {
        if !ok {
            self.fail(ReportWitness {
                label: label.into(),
                ..Default::default()
            });
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds a sub-report into this one, prefixing its counters.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for (k, v) in other.counters {
            self.count(format!("{prefix}.{k}"), v);
        }
        for mut w in other.witnesses {
            w.label = format!("{prefix}: {}", w.label);
            self.witnesses.push(w);
        }
        self.notes.extend(other.notes);
        self.passed &= other.passed;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

pub fn emit_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Text => {
            let counters: Vec<String> = report.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut line = format!("{}: ", report.name);
            if !counters.is_empty() {
                line.push_str(&counters.join(" "));
                line.push(' ');
            }
            if let Some(seed) = report.seed {
                line.push_str(&format!("seed={seed} "));
            }
            line.push_str(&format!("elapsed={}ms ", report.elapsed_ms));
            line.push_str(if report.passed { "PASS" } else { "FAIL" });
            let mut text = String::new();
            for w in &report.witnesses {
                text.push_str(&format!("  witness: {}", w.label));
                if let Some(map) = &w.map {
                    text.push_str(&format!(" map={map:?}"));
                }
                if !w.elements.is_empty() {
                    let els: Vec<&[u64]> = w.elements.iter().map(Element::coords).collect();
                    text.push_str(&format!(" elements={els:?}"));
                }
                text.push('\n');
            }
            text.push_str(&line);
            text.push('\n');
            Ok(text.into_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_summary_ends_with_verdict() {
        let mut r = Report::new("demo");
        r.set("maps", 3);
        let text = String::from_utf8(emit_report(&r, ReportFormat::Text).unwrap()).unwrap();
        assert!(text.trim_end().ends_with("PASS"));
        assert_eq!(text.lines().count(), 1);
        r.expect("broken", false);
        let text = String::from_utf8(emit_report(&r, ReportFormat::Text).unwrap()).unwrap();
        assert!(text.trim_end().ends_with("FAIL"));
    }

    #[test]
    fn json_excludes_timing() {
        let mut a = Report::new("demo");
        a.elapsed_ms = 5;
        let mut b = a.clone();
        b.elapsed_ms = 900;
        assert_eq!(emit_report(&a, ReportFormat::Json).unwrap(), emit_report(&b, ReportFormat::Json).unwrap());
    }
}
