//! Per-field scan records and their JSONL/CSV encodings.

use std::io::{BufRead, Read};

use greenberg_core::GrasReport;
use serde::{Deserialize, Serialize};

use crate::ScanError;

/// Column order of CSV exports; also the key order of JSONL records.
pub const CSV_HEADER: [&str; 19] = [
    "m",
    "ell",
    "status",
    "h",
    "unit_norm",
    "h_ell",
    "ord_l",
    "cl_prime_trivial",
    "wild_trivial",
    "v_eps",
    "v_pi",
    "min_v",
    "log_class_trivial",
    "bp_order_exponent",
    "level1_norm_index_exponent",
    "level1_trivial",
    "precision_used",
    "escalations",
    "wall_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// The logarithms vanished up to the precision cap.
    Unresolved,
}

/// One line of scan output.  Fields other than `m`, `ell` and `status` are
/// `null` for unresolved fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub m: u64,
    pub ell: u64,
    pub status: Status,
    pub h: Option<u64>,
    pub unit_norm: Option<i8>,
    pub h_ell: Option<u64>,
    pub ord_l: Option<u64>,
    pub cl_prime_trivial: Option<bool>,
    pub wild_trivial: Option<bool>,
    pub v_eps: Option<u32>,
    pub v_pi: Option<u32>,
    pub min_v: Option<u32>,
    pub log_class_trivial: Option<bool>,
    pub bp_order_exponent: Option<u32>,
    pub level1_norm_index_exponent: Option<u32>,
    pub level1_trivial: Option<bool>,
    pub precision_used: u32,
    pub escalations: Option<u32>,
    /// Only present when timings were requested, since it breaks
    /// reproducibility of the output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl ScanRecord {
    pub fn from_report(r: &GrasReport) -> Self {
        ScanRecord {
            m: r.m,
            ell: r.ell,
            status: Status::Ok,
            h: Some(r.h),
            unit_norm: Some(r.unit_norm),
            h_ell: Some(r.h_ell),
            ord_l: Some(r.ord_l),
            cl_prime_trivial: Some(r.cl_prime_trivial),
            wild_trivial: Some(r.wild_trivial),
            v_eps: Some(r.v_eps),
            v_pi: Some(r.v_pi),
            min_v: Some(r.min_v),
            log_class_trivial: Some(r.log_class_trivial),
            bp_order_exponent: Some(r.bp_order_exponent),
            level1_norm_index_exponent: Some(r.level1_norm_index_exponent),
            level1_trivial: Some(r.level1_trivial),
            precision_used: r.precision_used,
            escalations: Some(r.escalations),
            wall_ms: None,
        }
    }

    pub fn unresolved(m: u64, ell: u64, cap: u32) -> Self {
        ScanRecord {
            m,
            ell,
            status: Status::Unresolved,
            h: None,
            unit_norm: None,
            h_ell: None,
            ord_l: None,
            cl_prime_trivial: None,
            wild_trivial: None,
            v_eps: None,
            v_pi: None,
            min_v: None,
            log_class_trivial: None,
            bp_order_exponent: None,
            level1_norm_index_exponent: None,
            level1_trivial: None,
            precision_used: cap,
            escalations: None,
            wall_ms: None,
        }
    }

    /// Consistency of a record read back from disk.
    pub fn validate(&self) -> Result<(), String> {
        if self.status == Status::Unresolved {
            return Ok(());
        }
        let (Some(v_eps), Some(v_pi), Some(min_v), Some(cl), Some(log)) =
            (self.v_eps, self.v_pi, self.min_v, self.cl_prime_trivial, self.log_class_trivial)
        else {
            return Err("resolved record with missing fields".into());
        };
        if min_v != v_eps.min(v_pi) || min_v == 0 {
            return Err("min_v inconsistent with v_eps and v_pi".into());
        }
        if log != (cl && min_v == 1) {
            return Err("verdict inconsistent with its inputs".into());
        }
        if self.cl_prime_trivial.zip(self.h_ell.zip(self.ord_l)).is_some_and(|(c, (h, o))| c != (h == o)) {
            return Err("cl_prime_trivial inconsistent with h_ell and ord_l".into());
        }
        Ok(())
    }

    pub fn is_nontrivial(&self) -> bool {
        self.log_class_trivial == Some(false)
    }

    pub fn to_json_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("records serialize");
        s.push('\n');
        s
    }

    /// CSV fields in [`CSV_HEADER`] order.
    pub fn csv_fields(&self) -> Vec<String> {
        fn opt<T: ToString>(x: Option<T>) -> String {
            x.map(|v| v.to_string()).unwrap_or_default()
        }
        vec![
            self.m.to_string(),
            self.ell.to_string(),
            match self.status {
                Status::Ok => "ok".into(),
                Status::Unresolved => "unresolved".into(),
            },
            opt(self.h),
            opt(self.unit_norm),
            opt(self.h_ell),
            opt(self.ord_l),
            opt(self.cl_prime_trivial),
            opt(self.wild_trivial),
            opt(self.v_eps),
            opt(self.v_pi),
            opt(self.min_v),
            opt(self.log_class_trivial),
            opt(self.bp_order_exponent),
            opt(self.level1_norm_index_exponent),
            opt(self.level1_trivial),
            self.precision_used.to_string(),
            opt(self.escalations),
            opt(self.wall_ms),
        ]
    }

    pub fn to_csv_line(&self) -> String {
        csv_line(&self.csv_fields())
    }
}

pub fn csv_line<S: AsRef<[u8]>>(fields: &[S]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn csv_header_line() -> String {
    csv_line(&CSV_HEADER)
}

/// Records read back from a file, plus whether the file ended mid-record.
#[derive(Debug, Clone, Default)]
pub struct LoadedRecords {
    pub records: Vec<ScanRecord>,
    /// Byte length of the complete lines (header included).
    pub complete_len: u64,
    pub partial_tail: bool,
    pub format: Option<crate::Format>,
}

/// Parses a JSONL or CSV record file.  A trailing line without a newline is
/// treated as an interrupted write and ignored.
pub fn read_records(mut input: impl Read) -> Result<LoadedRecords, ScanError> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    let mut out = LoadedRecords::default();
    let mut line_no = 0usize;
    let mut offset = 0u64;
    let mut reader = std::io::BufReader::new(&buf[..]);
    let mut line = String::new();
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            break;
        }
        line_no += 1;
        if !line.ends_with('\n') {
            out.partial_tail = true;
            break;
        }
        offset += n as u64;
        let text = line.trim_end_matches(['\n', '\r']);
        let format = *out.format.get_or_insert(if text.starts_with('{') {
            crate::Format::Jsonl
        } else {
            crate::Format::Csv
        });
        let malformed = |reason: String| ScanError::MalformedRecord { line: line_no, reason };
        let record = match format {
            crate::Format::Jsonl => {
                serde_json::from_str::<ScanRecord>(text).map_err(|e| malformed(e.to_string()))?
            }
            crate::Format::Csv => {
                if line_no == 1 {
                    if text != csv_header_line().trim_end() {
                        return Err(malformed("unexpected CSV header".into()));
                    }
                    out.complete_len = offset;
                    continue;
                }
                let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
                let row = r
                    .records()
                    .next()
                    .ok_or_else(|| malformed("empty line".into()))?
                    .map_err(|e| malformed(e.to_string()))?;
                let header = csv::StringRecord::from(CSV_HEADER.to_vec());
                row.deserialize::<ScanRecord>(Some(&header)).map_err(|e| malformed(e.to_string()))?
            }
        };
        record.validate().map_err(malformed)?;
        if out.records.last().is_some_and(|prev| prev.m >= record.m) {
            return Err(malformed("records are not strictly increasing in m".into()));
        }
        out.records.push(record);
        out.complete_len = offset;
    }
    Ok(out)
}
