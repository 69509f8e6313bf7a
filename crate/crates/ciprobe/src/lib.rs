//! Corpus harness for `ciprobe-core`: the corpus format, per-entry
//! verification, reports and the on-disk cache.

pub mod cache;
pub mod corpus;
pub mod error;
pub mod report;
pub mod run;
pub mod verify;

pub use error::{HarnessError, Result};
