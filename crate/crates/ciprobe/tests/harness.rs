use std::process::Command;

use ciprobe::cache::Cache;
use ciprobe::corpus::parse_corpus;
use ciprobe::report::{CorpusReport, Status};
use ciprobe::run::{run_entries, RunOptions};

fn run(src: &str) -> CorpusReport {
    run_entries(&parse_corpus(src).unwrap(), &RunOptions::default()).unwrap()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ciprobe")).args(args).env_remove("CIPROBE_CACHE_DIR").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn empty_corpus_succeeds() {
    let r = run("# nothing here\n");
    assert!(r.success());
    assert_eq!(r.summary.entries, 0);
    assert_eq!(r.summary.checks, 0);
}

#[test]
fn wrong_expectation_is_reported_against_its_entry() {
    let r = run("entry liar\nfield Q\nring x,y\nideal x^2,x*y\nexpect ci=true h1zero=true conormalfree=true\n");
    assert!(!r.success());
    let e = &r.entries[0];
    assert_eq!(e.name, "liar");
    let failed: Vec<_> = e.failures().map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"expect.flags"), "{failed:?}");
    assert!(r.to_text().contains("liar"));
}

#[test]
fn wrong_deviations_fail() {
    let r = run("entry d\nfield Q\nring x\nideal x^2\nexpect deviations=1,1,0,0,0\n");
    let c = r.entries[0].checks.iter().find(|c| c.name == "expect.deviations").unwrap();
    assert_eq!(c.status, Status::Fail);
}

#[test]
fn wrong_lenstra_golden_fails() {
    let r = run("entry l\nfield Q\nring x\nideal x^2\nexpect lenstra=nontrivial\n");
    let c = r.entries[0].checks.iter().find(|c| c.name == "lenstra").unwrap();
    assert_eq!(c.status, Status::Fail);
}

#[test]
fn char_p_skips_char0_only_checks() {
    let r = run("entry p\nfield Fp 7\nring x,y\nideal x^2,y^2\n");
    assert!(r.success());
    for name in ["jacobi_zariski", "lenstra"] {
        let c = r.entries[0].checks.iter().find(|c| c.name == name).unwrap();
        assert_eq!(c.status, Status::Skipped, "{name}");
    }
}

#[test]
fn characteristic_not_above_hdeg_is_refused() {
    let r = run("entry p\nfield Fp 5\nring x,y\nideal x^2,y^2\n");
    let c = r.entries[0].checks.iter().find(|c| c.name == "pipeline").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert!(c.detail.contains("too small"), "{}", c.detail);
    let r = run("entry p\nfield Fp 5\nring x,y\nideal x^2,y^2\nbounds hdeg=4\n");
    assert!(r.success());
}

#[test]
fn json_roundtrip_and_timing_strip() {
    let r = run("entry a\nfield Q\nring x,y\nideal x^2,x*y\n");
    let json = r.to_json();
    let back: CorpusReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    let stripped = r.without_timing();
    assert!(stripped.timing_ms.is_none());
    assert!(stripped.entries.iter().all(|e| e.timing_ms.is_none()));
    assert!(!stripped.to_json().contains("timing_ms"));
}

#[test]
fn jobs_do_not_change_the_report() {
    let src = "entry a\nfield Q\nring x,y\nideal x^2,x*y\n\nentry b\nfield Q\nring x,y,z\nideal x^2,y^2,z^2\n\nentry c\nfield Fp 7\nring x\nideal x^3\n";
    let entries = parse_corpus(src).unwrap();
    let one = run_entries(&entries, &RunOptions { jobs: 1, cache: None }).unwrap().without_timing();
    let many = run_entries(&entries, &RunOptions { jobs: 3, cache: None }).unwrap().without_timing();
    assert_eq!(one.to_json(), many.to_json());
    assert_eq!(one.entries.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(), ["a", "b", "c"]);
}

#[test]
fn cache_reuse_matches_fresh_run() {
    let entries = parse_corpus("entry a\nfield Q\nring x,y\nideal x^2,x*y,y^2\n").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { jobs: 1, cache: Some(Cache::new(dir.path()).unwrap()) };
    let cold = run_entries(&entries, &opts).unwrap().without_timing();
    let warm = run_entries(&entries, &opts).unwrap().without_timing();
    let fresh = run_entries(&entries, &RunOptions::default()).unwrap().without_timing();
    assert_eq!(cold, warm);
    assert_eq!(cold, fresh);
}

#[test]
fn cli_groebner_basis() {
    let (code, out, _) = cli(&["gb", "--ring", "x,y", "--ideal", "x^2,x*y"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().collect::<Vec<_>>(), ["x*y", "x^2"]);
}

#[test]
fn cli_ci_verdicts() {
    let (code, out, _) = cli(&["ci", "--ring", "x,y", "--ideal", "x^2,y^2"]);
    assert_eq!(code, 0);
    assert!(out.contains("complete intersection: true"), "{out}");
    let (code, out, _) = cli(&["ci", "--ring", "x,y", "--ideal", "x^2,x*y,y^2"]);
    assert_eq!(code, 0);
    assert!(out.contains("complete intersection: false"), "{out}");
}

#[test]
fn cli_json_output_parses() {
    let (code, out, _) = cli(&["--json", "pi", "--ring", "x,y", "--ideal", "x^2,x*y"]);
    assert_eq!(code, 0);
    let _: serde_json::Value = serde_json::from_str(&out).unwrap();
}

#[test]
fn cli_parse_error_exits_2_with_position() {
    let (code, _, err) = cli(&["gb", "--ring", "x,y", "--ideal", "x^2+*y"]);
    assert_eq!(code, 2);
    assert!(err.contains("--ideal, column 5"), "{err}");
}

#[test]
fn cli_cache_location_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["bracket", "--ring", "x,y", "--ideal", "x^2,x*y,y^2"];
    let (_, plain, _) = cli(&args);
    let with = |dir: &std::path::Path, joined: bool| {
        let d = dir.to_str().unwrap().to_string();
        let mut v: Vec<String> = if joined { vec![format!("--cache-dir={d}")] } else { vec!["--cache-dir".into(), d] };
        v.extend(args.iter().map(|s| s.to_string()));
        let v: Vec<&str> = v.iter().map(String::as_str).collect();
        cli(&v)
    };
    for (dir, joined) in [(a.path(), false), (a.path(), true), (b.path(), true)] {
        let (code, out, _) = with(dir, joined);
        assert_eq!(code, 0);
        assert_eq!(out, plain);
    }
    // the two spellings share one key, so the first directory holds one entry
    assert_eq!(std::fs::read_dir(a.path()).unwrap().count(), 1);
}

#[test]
fn cli_corpus_run_reports_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.corpus");
    std::fs::write(&path, "entry liar\nfield Q\nring x,y\nideal x^2,x*y\nexpect ci=true h1zero=true conormalfree=true\n").unwrap();
    let (code, out, _) = cli(&["corpus", "run", path.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, 1);
    assert!(out.contains("liar"));
}

mod verdicts {
    use ciprobe::corpus::{Bounds, CorpusEntry};
    use ciprobe::verify::{ci_certificate, verify_theorem_a, verify_theorem_b};

    fn entry(ideal: &str) -> CorpusEntry {
        CorpusEntry::from_parts("t", "Q", "x,y", ideal, Bounds::default()).unwrap()
    }

    #[test]
    fn ci_certificates() {
        let v = ci_certificate(&entry("x^2, y^2").ideal, 12).unwrap();
        assert!(v.is_ci && v.h1_zero);
        let v = ci_certificate(&entry("x^2, x*y, y^2").ideal, 12).unwrap();
        assert_eq!((v.is_ci, v.mu, v.height), (false, 3, 2));
        let v = ci_certificate(&entry("x^2, x*y").ideal, 12).unwrap();
        assert_eq!((v.is_ci, v.mu, v.height, v.h1_zero), (false, 2, 1, false));
    }

    #[test]
    fn theorem_a_shapes() {
        let r = verify_theorem_a(&entry("x^2, y^2")).unwrap();
        assert!(r.is_ci && r.quotient_projdim.starts_with("Finite(2)") && r.module_projdim.starts_with("Finite(0)"));
        for ideal in ["x^2, x*y, y^2", "x^2, x*y"] {
            let r = verify_theorem_a(&entry(ideal)).unwrap();
            assert!(r.quotient_projdim.starts_with("Finite("), "{ideal}: {}", r.quotient_projdim);
            assert_eq!(r.module_projdim, "NotTerminatedWithin(8)");
            assert!(r.evidence_complete);
        }
    }

    #[test]
    fn theorem_b_shapes() {
        let r = verify_theorem_b(&entry("x^2, y^2")).unwrap();
        assert!(r.is_ci && r.module_projdim.starts_with("Finite(0)"));
        for ideal in ["x^2, x*y, y^2", "x^2, x*y"] {
            let r = verify_theorem_b(&entry(ideal)).unwrap();
            assert_eq!(r.module_projdim, "NotTerminatedWithin(8)");
            assert!(r.evidence_complete);
            assert!(r.gulliksen.as_deref().unwrap().starts_with("NoneFound"), "{:?}", r.gulliksen);
        }
    }
}
