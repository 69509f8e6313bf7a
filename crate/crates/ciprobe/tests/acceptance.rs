//! End-to-end acceptance suite over the bundled corpus.
//!
//! Runs without the libtest harness so the one-line-per-criterion verdicts are
//! always printed; exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use ciprobe::cache::Cache;
use ciprobe::corpus::{parse_corpus, CorpusEntry};
use ciprobe::report::{CorpusReport, EntryReport, Status};
use ciprobe::run::{run_entries, RunOptions};

const BUDGET: Duration = Duration::from_secs(60);

fn corpus() -> Vec<CorpusEntry> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/default.corpus");
    parse_corpus(&std::fs::read_to_string(path).unwrap()).unwrap()
}

struct Verdict {
    ok: bool,
}

impl Verdict {
    fn new() -> Self {
        Verdict { ok: true }
    }

    fn record(&mut self, n: u8, title: &str, problems: &[String]) {
        let pass = problems.is_empty();
        self.ok &= pass;
        let line = format!("criterion {n} ({title}): {}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        for p in problems {
            println!("    {p}");
        }
    }
}

/// Every check tagged with `criterion` must pass; pipeline failures (tag 0)
/// count against all criteria.
fn tagged_failures(report: &CorpusReport, criterion: u8) -> Vec<String> {
    let mut out = Vec::new();
    for e in &report.entries {
        for c in &e.checks {
            if c.criterion != criterion && c.criterion != 0 {
                continue;
            }
            match c.status {
                Status::Pass | Status::Skipped => {}
                _ => out.push(format!("{}: {} {} ({})", e.name, c.name, c.status.label(), c.detail)),
            }
        }
    }
    out
}

fn entry<'a>(report: &'a CorpusReport, name: &str) -> &'a EntryReport {
    report.entries.iter().find(|e| e.name == name).unwrap_or_else(|| panic!("corpus lacks entry {name}"))
}

fn check_passed(e: &EntryReport, name: &str) -> bool {
    e.checks.iter().any(|c| c.name == name && c.status == Status::Pass)
}

fn positive_every_step(betti: &[[i64; 3]], steps: i64) -> bool {
    (0..=steps).all(|i| betti.iter().any(|t| t[0] == i && t[2] > 0))
}

fn criterion1(entries: &[CorpusEntry], report: &CorpusReport, elapsed: Duration) -> Vec<String> {
    let mut p = tagged_failures(report, 1);
    if entries.len() < 12 {
        p.push(format!("only {} corpus entries", entries.len()));
    }
    // families required by the acceptance statement
    let families: [(&str, &[&str]); 9] = [
        ("CI codim 1", &["ci1_x2", "ci1_xy"]),
        ("CI codim 2", &["ci2_x2_y2", "ci2_quadrics"]),
        ("CI codim 3", &["ci3_squares"]),
        ("(x^2,xy)", &["x2_xy"]),
        ("(x^2,xy,y^2)", &["m2_2vars"]),
        ("m^2", &["m2_2vars"]),
        ("m^3", &["m3_2vars"]),
        ("hypersurface", &["hypersurface_cone"]),
        ("non-CI almost complete intersection", &["aci_cubics"]),
    ];
    for (family, names) in families {
        for n in names {
            if !entries.iter().any(|e| e.name == *n) {
                p.push(format!("family {family}: missing entry {n}"));
            }
        }
    }
    for e in &report.entries {
        for needed in ["koszul.square_zero", "model.square_zero", "model.minimal", "model.acyclic"] {
            if !check_passed(e, needed) {
                p.push(format!("{}: {needed} did not pass", e.name));
            }
        }
    }
    if elapsed > BUDGET {
        p.push(format!("corpus took {elapsed:?}, budget {BUDGET:?}"));
    }
    p
}

fn criterion2(report: &CorpusReport) -> Vec<String> {
    let mut p = tagged_failures(report, 2);
    for e in &report.entries {
        for needed in ["lie.antisymmetry", "lie.jacobi", "theta.induced_ad"] {
            if !check_passed(e, needed) {
                p.push(format!("{}: {needed} did not pass", e.name));
            }
        }
    }
    p
}

fn criterion3(report: &CorpusReport) -> Vec<String> {
    let mut p = tagged_failures(report, 3);
    for e in &report.entries {
        for needed in ["conormal.routes", "model.x2_vs_h1", "ext.crosscheck"] {
            if !check_passed(e, needed) {
                p.push(format!("{}: {needed} did not pass", e.name));
            }
        }
        let x2 = e.data.deviations.get(1).copied().unwrap_or(0);
        if Some(x2) != e.data.h1_generators {
            p.push(format!("{}: |X2| = {x2} but mu(H1) = {:?}", e.name, e.data.h1_generators));
        }
    }
    p
}

fn criterion4(report: &CorpusReport) -> Vec<String> {
    let mut p = tagged_failures(report, 4);
    for e in &report.entries {
        let d = &e.data;
        match d.is_ci {
            Some(true) => {
                if d.h1_generators != Some(0) {
                    p.push(format!("{}: CI with H1 generators {:?}", e.name, d.h1_generators));
                }
                if !d.projdim_conormal.starts_with("Finite(0)") || d.mu != d.height {
                    p.push(format!(
                        "{}: conormal not free of rank height ({}, mu {:?}, height {:?})",
                        e.name, d.projdim_conormal, d.mu, d.height
                    ));
                }
                if d.pi_dims.iter().skip(2).any(|&x| x != 0) {
                    p.push(format!("{}: pi above degree 2 is {:?}", e.name, d.pi_dims));
                }
                if d.nonzero_brackets != 0 {
                    p.push(format!("{}: {} nonzero brackets", e.name, d.nonzero_brackets));
                }
            }
            Some(false) => {
                let bound = e.bounds.reslen;
                let expected = format!("NotTerminatedWithin({bound})");
                for (what, pd, betti) in [("I/I^2", &d.projdim_conormal, &d.betti_conormal), ("H1", &d.projdim_h1, &d.betti_h1)] {
                    if *pd != expected {
                        p.push(format!("{}: {what} projdim {pd}, expected {expected}", e.name));
                    }
                    if !positive_every_step(betti, bound as i64) {
                        p.push(format!("{}: {what} Betti numbers vanish before step {bound}", e.name));
                    }
                }
                if !d.gulliksen.starts_with("NoneFound") {
                    p.push(format!("{}: Gulliksen probe reported {}", e.name, d.gulliksen));
                }
            }
            None => p.push(format!("{}: CI status unknown", e.name)),
        }
    }
    p
}

fn criterion5(report: &CorpusReport) -> Vec<String> {
    let mut p = tagged_failures(report, 5);
    for e in report.entries.iter().filter(|e| e.field == "Q") {
        if !check_passed(e, "jacobi_zariski") {
            p.push(format!("{}: jacobi_zariski did not pass", e.name));
        }
        if !check_passed(e, "lenstra") {
            p.push(format!("{}: lenstra did not match its frozen verdict", e.name));
        }
    }
    for name in ["ci1_x2", "linear_x"] {
        let got = entry(report, name).data.lenstra.as_deref();
        if got != Some("TrivialEvolutionsOnly") {
            p.push(format!("{name}: lenstra verdict {got:?}"));
        }
    }
    p
}

fn criterion6(entries: &[CorpusEntry], first: &CorpusReport) -> Vec<String> {
    let mut p = Vec::new();
    let reference = first.without_timing().to_json();
    let uncached = run_entries(entries, &RunOptions { jobs: 0, cache: None }).unwrap();
    if uncached.without_timing().to_json() != reference {
        p.push("two uncached runs differ".to_string());
    }
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { jobs: 0, cache: Some(Cache::new(dir.path()).unwrap()) };
    for pass in ["cold", "warm"] {
        let r = run_entries(entries, &opts).unwrap();
        if r.without_timing().to_json() != reference {
            p.push(format!("{pass} cached run differs from uncached run"));
        }
    }
    if std::fs::read_dir(dir.path()).unwrap().count() == 0 {
        p.push("cache directory stayed empty".to_string());
    }
    p
}

fn main() {
    let entries = corpus();
    let start = Instant::now();
    let report = run_entries(&entries, &RunOptions { jobs: 0, cache: None }).unwrap();
    let elapsed = start.elapsed();
    println!("corpus: {} entries in {elapsed:?}", entries.len());

    let mut v = Verdict::new();
    v.record(1, "structural exactness", &criterion1(&entries, &report, elapsed));
    v.record(2, "Lie structure", &criterion2(&report));
    v.record(3, "oracle equivalences", &criterion3(&report));
    v.record(4, "theorem consistency", &criterion4(&report));
    v.record(5, "Jacobi-Zariski and Lenstra", &criterion5(&report));
    v.record(6, "determinism", &criterion6(&entries, &report));
    if !v.ok {
        std::process::exit(1);
    }
}
