//! Serialisable reports. The JSON layout is versioned by [`SCHEMA`];
//! everything except `timing_ms` is a deterministic function of the input.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::Bounds;

pub const SCHEMA: &str = "ciprobe-report/1";

/// `[homological degree, internal degree, rank]`.
pub type BettiTriple = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Every inconclusive verdict names the bound that stopped it.
    Inconclusive {
        bound: String,
    },
    Skipped,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive { .. } => "INCONCLUSIVE",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    /// Acceptance criterion the check feeds (0 for pipeline failures).
    pub criterion: u8,
    pub name: String,
    #[serde(flatten)]
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryData {
    pub is_ci: Option<bool>,
    pub mu: Option<usize>,
    pub height: Option<usize>,
    pub h1_generators: Option<usize>,
    pub hilbert: Vec<usize>,
    pub deviations: Vec<usize>,
    pub pi_dims: Vec<usize>,
    pub nonzero_brackets: usize,
    pub radical: Vec<String>,
    pub projdim_quotient: String,
    pub projdim_conormal: String,
    pub projdim_h1: String,
    pub betti_quotient: Vec<BettiTriple>,
    pub betti_conormal: Vec<BettiTriple>,
    pub betti_h1: Vec<BettiTriple>,
    pub betti_residue: Vec<BettiTriple>,
    pub conormal_hilbert: Vec<usize>,
    pub gulliksen: String,
    /// `[degree, D_1, I/I², S⊗Ω_R, Ω_S]` slice dimensions.
    pub jacobi_zariski: Vec<[i64; 5]>,
    pub lenstra: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub name: String,
    pub field: String,
    pub ring: Vec<String>,
    pub ideal: Vec<String>,
    pub bounds: Bounds,
    pub checks: Vec<Check>,
    pub data: EntryData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl EntryReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub entries: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema: String,
    pub entries: Vec<EntryReport>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CorpusReport {
    pub fn new(entries: Vec<EntryReport>) -> Self {
        let mut s = Summary { entries: entries.len(), ..Default::default() };
        for c in entries.iter().flat_map(|e| &e.checks) {
            s.checks += 1;
            match c.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Inconclusive { .. } => s.inconclusive += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        CorpusReport { schema: SCHEMA.to_string(), entries, summary: s, timing_ms: None }
    }

    pub fn success(&self) -> bool {
        self.summary.failed == 0
    }

    /// The same report with every timing field cleared.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.timing_ms = None;
        for e in &mut r.entries {
            e.timing_ms = None;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "entry {} [{}] {} / ({})", e.name, e.field, e.ring.join(", "), e.ideal.join(", "));
            for c in &e.checks {
                let bound = match &c.status {
                    Status::Inconclusive { bound } => format!(" <{bound}>"),
                    _ => String::new(),
                };
                let _ = writeln!(s, "  {:<12} c{} {:<26} {}{}", c.status.label(), c.criterion, c.name, c.detail, bound);
            }
            if let Some(t) = e.timing_ms {
                let _ = writeln!(s, "  time {t} ms");
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "summary: {} entries, {} checks, {} passed, {} failed, {} inconclusive, {} skipped",
            m.entries, m.checks, m.passed, m.failed, m.inconclusive, m.skipped
        );
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "total time {t} ms");
        }
        s
    }
}
