use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use greenberg_core::arith;
use greenberg_core::greenberg::{gras_criterion_with, CriterionOptions, GrasError, DEFAULT_PRECISION, PRECISION_CAP};

use crate::record::{csv_header_line, read_records, ScanRecord};
use crate::summary::ScanSummary;
use crate::{Format, ScanError};

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub ell: u64,
    /// Exclusive upper bound on `m`.
    pub bound: u64,
    pub precision_start: u32,
    pub precision_cap: u32,
    pub jobs: usize,
    /// `None` writes to standard output.
    pub out: Option<PathBuf>,
    pub format: Format,
    pub resume: bool,
    /// Record per-field wall time (makes output run-dependent).
    pub timings: bool,
    /// Test hook: after this many records, write half a line and abort the
    /// process, as an external kill would.
    pub stop_after: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            ell: 3,
            bound: 10_000,
            precision_start: DEFAULT_PRECISION,
            precision_cap: PRECISION_CAP,
            jobs: 1,
            out: None,
            format: Format::Jsonl,
            resume: false,
            timings: false,
            stop_after: None,
        }
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<(), ScanError> {
        let bad = |s: &str| Err(ScanError::InvalidConfig(s.into()));
        if self.ell == 2 || !arith::is_prime_u64(self.ell) {
            return bad("ell must be an odd prime");
        }
        if self.bound < 2 {
            return bad("bound must be at least 2");
        }
        if self.jobs == 0 {
            return bad("jobs must be positive");
        }
        if self.precision_start < greenberg_core::padic::MIN_PRECISION || self.precision_start > self.precision_cap {
            return bad("precision must lie between the minimum and the cap");
        }
        if self.resume && self.out.is_none() {
            return bad("--resume needs --out");
        }
        Ok(())
    }
}

/// Squarefree `m` in `[2, bound)` in which `ell` splits, in increasing order.
pub fn enumerate_fields(ell: u64, bound: u64) -> Result<Vec<u64>, ScanError> {
    if ell == 2 || !arith::is_prime_u64(ell) {
        return Err(ScanError::InvalidConfig("ell must be an odd prime".into()));
    }
    if bound <= 2 {
        return Ok(Vec::new());
    }
    let n = bound as usize;
    let mut squarefree = vec![true; n];
    let mut p = 2usize;
    while p * p < n {
        for k in (p * p..n).step_by(p * p) {
            squarefree[k] = false;
        }
        p += 1;
    }
    Ok((2..bound)
        .filter(|&m| squarefree[m as usize])
        .filter(|&m| {
            let disc = if m % 4 == 1 { m } else { 4 * m };
            arith::legendre((disc % ell) as i64, ell) == 1
        })
        .collect())
}

fn compute(m: u64, cfg: &ScanConfig) -> Result<ScanRecord, ScanError> {
    let start = Instant::now();
    let opts = CriterionOptions {
        precision_start: cfg.precision_start,
        precision_cap: cfg.precision_cap,
        flip_branch: false,
    };
    let mut record = match gras_criterion_with(m, cfg.ell, opts) {
        Ok(report) => {
            report.validate().map_err(|reason| ScanError::Validation { m, reason })?;
            ScanRecord::from_report(&report)
        }
        Err(GrasError::PrecisionCapExceeded { .. }) => ScanRecord::unresolved(m, cfg.ell, cfg.precision_cap),
        Err(source) => return Err(ScanError::Field { m, source }),
    };
    if cfg.timings {
        record.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(record)
}

fn encode(r: &ScanRecord, format: Format) -> String {
    match format {
        Format::Jsonl => r.to_json_line(),
        Format::Csv => r.to_csv_line(),
    }
}

/// Opens the output, replaying an existing file when resuming.  Returns the
/// writer and the records already on disk.
fn open_output(cfg: &ScanConfig) -> Result<(Box<dyn Write + Send>, Vec<ScanRecord>), ScanError> {
    let Some(path) = &cfg.out else {
        return Ok((Box::new(io::stdout()), Vec::new()));
    };
    if cfg.resume && path.exists() {
        let loaded = read_records(File::open(path)?)?;
        if loaded.format.is_some_and(|f| f != cfg.format) {
            return Err(ScanError::InvalidConfig("existing file has a different format".into()));
        }
        if loaded.records.iter().any(|r| r.ell != cfg.ell || r.m >= cfg.bound) {
            return Err(ScanError::InvalidConfig("existing records do not belong to this scan".into()));
        }
        // Drop an interrupted last line, then continue after the complete ones.
        let file = OpenOptions::new().append(true).open(path)?;
        file.set_len(loaded.complete_len)?;
        let mut w: Box<dyn Write + Send> = Box::new(BufWriter::new(file));
        if loaded.format.is_none() && cfg.format == Format::Csv {
            w.write_all(csv_header_line().as_bytes())?;
        }
        return Ok((w, loaded.records));
    }
    let mut w: Box<dyn Write + Send> = Box::new(BufWriter::new(File::create(path)?));
    if cfg.format == Format::Csv {
        w.write_all(csv_header_line().as_bytes())?;
    }
    Ok((w, Vec::new()))
}

/// Runs the criterion on every eligible field, writing records sorted by `m`.
///
/// Workers pull fields from a shared counter; a single writer reorders
/// their results, so the output does not depend on `jobs`.  Every record is
/// flushed as soon as all smaller `m` are written, which makes the file a
/// valid checkpoint at all times.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanSummary, ScanError> {
    cfg.validate()?;
    let fields = enumerate_fields(cfg.ell, cfg.bound)?;
    let (mut out, done) = open_output(cfg)?;
    let mut summary = ScanSummary::new(cfg.ell, Some(cfg.bound));
    for r in &done {
        summary.add(r);
    }
    let last_done = done.last().map(|r| r.m);
    let todo: Vec<u64> = fields.into_iter().filter(|&m| last_done.map_or(true, |l| m > l)).collect();
    if cfg.format == Format::Csv && cfg.out.is_none() {
        out.write_all(csv_header_line().as_bytes())?;
    }

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<ScanRecord, ScanError>)>();
    let result = std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.min(todo.len().max(1)) {
            let tx = tx.clone();
            let (next, stop, todo) = (&next, &stop, &todo);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&m) = todo.get(i) else { break };
                if tx.send((i, compute(m, cfg))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<usize, ScanRecord> = BTreeMap::new();
        let mut written = 0usize;
        let outcome = (|| -> Result<(), ScanError> {
            for (i, res) in rx.iter() {
                pending.insert(i, res?);
                while let Some(r) = pending.remove(&written) {
                    if cfg.stop_after == Some(written) {
                        let line = encode(&r, cfg.format);
                        out.write_all(&line.as_bytes()[..line.len() / 2])?;
                        out.flush()?;
                        std::process::abort();
                    }
                    out.write_all(encode(&r, cfg.format).as_bytes())?;
                    out.flush()?;
                    summary.add(&r);
                    written += 1;
                }
            }
            Ok(())
        })();
        if outcome.is_err() {
            stop.store(true, Ordering::Relaxed);
            // Drain so blocked workers can finish.
            for _ in rx.iter() {}
        }
        outcome
    });
    out.flush()?;
    result?;
    Ok(summary)
}
