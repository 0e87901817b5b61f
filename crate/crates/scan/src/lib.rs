//! Batch scanning of real quadratic fields for the logarithmic class group
//! criterion, with resumable JSONL/CSV output and summaries.

pub mod lambda;
pub mod record;
pub mod scan;
pub mod summary;

pub use record::{read_records, ScanRecord, Status};
pub use scan::{enumerate_fields, run_scan, ScanConfig};
pub use summary::{published_counts, summarize, ScanSummary};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("m = {m}: {source}")]
    Field { m: u64, source: greenberg_core::GrasError },
    #[error("m = {m}: record failed validation: {reason}")]
    Validation { m: u64, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Iwasawa(#[from] greenberg_core::IwasawaError),
}
