#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_greenberg"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn greenberg")
}

pub fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("greenberg-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn scan_to(path: &Path, bound: u64, jobs: usize, format: &str, extra: &[&str]) -> Output {
    let (b, j) = (bound.to_string(), jobs.to_string());
    let mut args = vec!["scan", "--bound", &b, "--jobs", &j, "--format", format, "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

/// Runs the scan with one and with eight workers, and once more killed
/// after `kill_after` records and resumed; all three files must agree
/// byte for byte.
pub fn determinism_and_resume(bound: u64, format: &str, kill_after: usize, tag: &str) -> Result<(), String> {
    let dir = scratch(tag);
    let ext = if format == "csv" { "csv" } else { "jsonl" };
    let (serial, parallel, resumed) =
        (dir.join(format!("serial.{ext}")), dir.join(format!("parallel.{ext}")), dir.join(format!("resumed.{ext}")));

    for (path, jobs) in [(&serial, 1), (&parallel, 8)] {
        let out = scan_to(path, bound, jobs, format, &[]);
        if !out.status.success() {
            return Err(format!("scan --jobs {jobs} exited with {:?}", out.status));
        }
    }
    let killed = scan_to(&resumed, bound, 8, format, &["--stop-after", &kill_after.to_string()]);
    if killed.status.success() {
        return Err("the forced stop did not terminate the scan".into());
    }
    let partial = std::fs::read(&resumed).map_err(|e| e.to_string())?;
    if partial.last() == Some(&b'\n') {
        return Err("the killed run left no partial line".into());
    }
    let out = scan_to(&resumed, bound, 8, format, &["--resume"]);
    if !out.status.success() {
        return Err(format!("resume exited with {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }

    let a = std::fs::read(&serial).unwrap();
    let b = std::fs::read(&parallel).unwrap();
    let c = std::fs::read(&resumed).unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    if a.is_empty() {
        return Err("empty output".into());
    }
    if a != b {
        return Err("jobs 1 and jobs 8 differ".into());
    }
    if a != c {
        return Err("the resumed file differs from an uninterrupted run".into());
    }
    Ok(())
}
