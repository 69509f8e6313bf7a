//! Concurrent corpus evaluation.

use std::time::Instant;

use rayon::prelude::*;

use crate::cache::Cache;
use crate::corpus::{parse_corpus, CorpusEntry};
use crate::error::{HarnessError, Result};
use crate::report::{CorpusReport, EntryReport};
use crate::verify::check_entry;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `0` lets rayon decide.
    pub jobs: usize,
    pub cache: Option<Cache>,
}

fn evaluate(entry: &CorpusEntry, cache: Option<&Cache>) -> Result<EntryReport> {
    let start = Instant::now();
    let mut report = match cache {
        Some(c) => {
            let key = Cache::key(&["entry-check", &entry.canonical()]);
            c.get_or_compute(&key, || Ok(check_entry(entry)))?
        }
        None => check_entry(entry),
    };
    report.timing_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

/// Evaluates the entries (in parallel) and reports them in input order.
pub fn run_entries(entries: &[CorpusEntry], opts: &RunOptions) -> Result<CorpusReport> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().map_err(|e| HarnessError::Usage(e.to_string()))?;
    let reports: Result<Vec<EntryReport>> = pool.install(|| entries.par_iter().map(|e| evaluate(e, opts.cache.as_ref())).collect());
    let mut r = CorpusReport::new(reports?);
    r.timing_ms = Some(start.elapsed().as_millis() as u64);
    Ok(r)
}

pub fn run_corpus(path: &std::path::Path, opts: &RunOptions) -> Result<CorpusReport> {
    let text = std::fs::read_to_string(path)?;
    run_entries(&parse_corpus(&text)?, opts)
}
