use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use crate::record::{read_records, ScanRecord, Status};
use crate::ScanError;

/// Counts published for `l = 3`: `(bound, eligible, nontrivial)`.
const PUBLISHED: [(u64, u64, u64); 3] =
    [(10_000, 2256, 237), (100_000, 22793, 2801), (1_000_000, 227953, 30747)];

/// Published `(eligible, nontrivial)` for this `(ell, bound)`, if any.
pub fn published_counts(ell: u64, bound: u64) -> Option<(u64, u64)> {
    PUBLISHED.iter().find(|p| ell == 3 && p.0 == bound).map(|p| (p.1, p.2))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub ell: Option<u64>,
    pub bound: Option<u64>,
    pub eligible: u64,
    pub nontrivial: u64,
    pub unresolved: u64,
    /// Fields whose level-one verdict differs from the logarithmic one.
    pub level1_mismatches: u64,
    /// Counts keyed by `(cl_prime_trivial, min_v)`.
    pub histogram: BTreeMap<(bool, u32), u64>,
    /// Fewer records than eligible fields, or an interrupted last line.
    pub partial: bool,
}

impl ScanSummary {
    pub fn new(ell: u64, bound: Option<u64>) -> Self {
        ScanSummary { ell: Some(ell), bound, ..Default::default() }
    }

    pub fn add(&mut self, r: &ScanRecord) {
        self.ell.get_or_insert(r.ell);
        self.eligible += 1;
        if r.status == Status::Unresolved {
            self.unresolved += 1;
            return;
        }
        if r.is_nontrivial() {
            self.nontrivial += 1;
        }
        if r.level1_trivial != r.log_class_trivial {
            self.level1_mismatches += 1;
        }
        if let (Some(c), Some(v)) = (r.cl_prime_trivial, r.min_v) {
            *self.histogram.entry((c, v)).or_default() += 1;
        }
    }

    pub fn ratio(&self) -> f64 {
        if self.eligible == 0 {
            0.0
        } else {
            self.nontrivial as f64 / self.eligible as f64
        }
    }

    pub fn published(&self) -> Option<(u64, u64)> {
        published_counts(self.ell?, self.bound?)
    }

    /// `(eligible matches, nontrivial matches)` against the published table.
    pub fn matches_published(&self) -> Option<(bool, bool)> {
        self.published().map(|(e, n)| (self.eligible == e, self.nontrivial == n))
    }
}

impl fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(f, "ell                {}", show(self.ell))?;
        writeln!(f, "bound              {}", show(self.bound))?;
        writeln!(f, "eligible           {}", self.eligible)?;
        writeln!(f, "nontrivial         {}", self.nontrivial)?;
        writeln!(f, "unresolved         {}", self.unresolved)?;
        writeln!(f, "ratio              {:.6}", self.ratio())?;
        writeln!(f, "level1 mismatches  {}", self.level1_mismatches)?;
        writeln!(f, "partial            {}", self.partial)?;
        writeln!(f, "cl_prime_trivial  min_v  count")?;
        for ((c, v), n) in &self.histogram {
            writeln!(f, "{:<17} {:<6} {}", c, v, n)?;
        }
        if let Some((e, n)) = self.published() {
            let verdict = |ok: bool| if ok { "match" } else { "MISMATCH" };
            writeln!(f, "published eligible   {e:<8} {}", verdict(e == self.eligible))?;
            writeln!(f, "published nontrivial {n:<8} {}", verdict(n == self.nontrivial))?;
        }
        Ok(())
    }
}

/// Recomputes the summary of a record file.  When `bound` is given, the file
/// is compared against the enumeration and the published table.
pub fn summarize(input: impl Read, bound: Option<u64>) -> Result<ScanSummary, ScanError> {
    let loaded = read_records(input)?;
    let mut s = ScanSummary { bound, ..Default::default() };
    for r in &loaded.records {
        if s.ell.is_some_and(|e| e != r.ell) {
            return Err(ScanError::InvalidConfig("records for several primes".into()));
        }
        s.add(r);
    }
    s.partial = loaded.partial_tail;
    if let (Some(ell), Some(b)) = (s.ell, bound) {
        s.partial |= crate::enumerate_fields(ell, b)?.len() as u64 != s.eligible;
    }
    Ok(s)
}
