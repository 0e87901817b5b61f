//! One line per acceptance criterion.  Run with
//! `cargo test -p greenberg-scan --test acceptance`; set
//! `GREENBERG_ACCEPT_FULL=1` to include the scan to one million.

mod common;
#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::process::ExitCode;
use std::time::Instant;

use greenberg_scan::{run_scan, ScanConfig, ScanSummary};

struct Report {
    failed_required: Vec<String>,
}

impl Report {
    /// `required` criteria fail the target; the others are printed only.
    fn line(&mut self, id: &str, required: bool, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id}: {detail}");
        if required && !ok {
            self.failed_required.push(id.to_string());
        }
    }
}

fn scan(bound: u64) -> (ScanSummary, f64) {
    let dir = common::scratch(&format!("accept-{bound}"));
    let cfg = ScanConfig {
        bound,
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        out: Some(dir.join("records.jsonl")),
        ..ScanConfig::default()
    };
    let start = Instant::now();
    let summary = run_scan(&cfg).expect("scan");
    let secs = start.elapsed().as_secs_f64();
    let _ = std::fs::remove_dir_all(&dir);
    (summary, secs)
}

fn counts(report: &mut Report, id: &str, bound: u64, eligible: u64, nontrivial: u64) -> ScanSummary {
    let (s, secs) = scan(bound);
    report.line(
        &format!("{id}a eligible({bound})"),
        false,
        s.eligible == eligible,
        format!("{} fields enumerated, expected {eligible}", s.eligible),
    );
    report.line(
        &format!("{id}b nontrivial({bound})"),
        true,
        s.nontrivial == nontrivial && s.unresolved == 0,
        format!("{} nontrivial, {} unresolved, expected {nontrivial} ({secs:.1}s)", s.nontrivial, s.unresolved),
    );
    s
}

fn suite(report: &mut Report, id: &str, run: impl FnOnce() -> Result<(), String>) -> f64 {
    let start = Instant::now();
    let result = run();
    let secs = start.elapsed().as_secs_f64();
    let detail = match &result {
        Ok(()) => format!("{secs:.2}s"),
        Err(e) => e.clone(),
    };
    report.line(id, true, result.is_ok(), detail);
    secs
}

fn main() -> ExitCode {
    let mut report = Report { failed_required: Vec::new() };

    let small = counts(&mut report, "1", 10_000, 2256, 237);
    counts(&mut report, "2", 100_000, 22793, 2801);
    if std::env::var_os("GREENBERG_ACCEPT_FULL").is_some() {
        counts(&mut report, "3", 1_000_000, 227953, 30747);
    } else {
        println!("[SKIP] 3 counts(1000000): set GREENBERG_ACCEPT_FULL=1 to run");
    }

    let start = Instant::now();
    let mismatches = support::cycles::class_number_mismatches(10_000);
    report.line(
        "4 class numbers vs cycle counting, D < 10^4",
        true,
        mismatches.as_ref().is_ok_and(|v| v.is_empty()),
        match mismatches {
            Ok(v) if v.is_empty() => format!("all agree ({:.1}s)", start.elapsed().as_secs_f64()),
            Ok(v) => format!("mismatches at m = {v:?}"),
            Err(e) => e,
        },
    );

    report.line(
        "5 level-one verdict = logarithmic verdict, bound 10^4",
        true,
        small.level1_mismatches == 0 && small.unresolved == 0,
        format!("{} mismatches over {} fields", small.level1_mismatches, small.eligible),
    );

    let mut total = 0.0;
    total += suite(&mut report, "6a root-branch invariance and log sum zero (500 m)", || {
        support::suites::root_branch_suite(500)
    });
    total += suite(&mut report, "6b Herbrand vs truncated matrices (200 modules)", || {
        support::suites::herbrand_suite(200)
    });
    total += suite(&mut report, "6c growth fit (100 modules)", || support::suites::growth_suite(100));
    total += suite(&mut report, "6d capitulation stabilizes to |F| (100 modules)", || {
        support::suites::capitulation_suite(100)
    });
    total += suite(&mut report, "6e idempotents, d in {1,2,4}, l in {3,5,13}", support::suites::idempotent_suite);
    report.line("6 property suites under two minutes", true, total < 120.0, format!("{total:.1}s"));

    for (format, kill) in [("jsonl", 300), ("csv", 211)] {
        let result = common::determinism_and_resume(2000, format, kill, &format!("accept-{format}"));
        report.line(
            &format!("7 byte-identical {format} across jobs 1/8 and a kill-resume, bound 2000"),
            true,
            result.is_ok(),
            result.err().unwrap_or_else(|| "identical".into()),
        );
    }

    if report.failed_required.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("required criteria failed: {:?}", report.failed_required);
        ExitCode::FAILURE
    }
}
