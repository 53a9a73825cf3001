//! Machine-readable claim reports, schema `fc-report/1`.
//!
//! One JSON document per claim: identifier, the gamma window as a decimal
//! string, the verdict, named enclosures as `[lo, hi]` decimal-string pairs,
//! the segment count, the worst segment and the wall time. Report files are
//! append-only: each run writes a fresh timestamped file.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::rint::Interval;

pub const SCHEMA: &str = "fc-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Failed,
    NotReached,
}

impl Verdict {
    /// Monotone combination: a single failure dominates, an unfinished
    /// component can never certify.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (NotReached, _) | (_, NotReached) => NotReached,
            _ => Certified,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::Failed => 1,
            Verdict::NotReached => 2,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Failed => "failed",
            Verdict::NotReached => "not_reached",
        })
    }
}

/// Claim-level certificate.
#[derive(Debug, Clone)]
pub struct ClaimReport {
    pub claim_id: String,
    pub gamma: Interval,
    pub verdict: Verdict,
    pub enclosures: Vec<(String, Interval)>,
    pub segments_checked: usize,
    pub worst_segment: Option<String>,
    pub wall_seconds: f64,
    pub notes: Vec<String>,
}

impl ClaimReport {
    pub fn one_line(&self) -> String {
        format!(
            "{}: {} ({} segments, {:.2}s){}",
            self.claim_id,
            self.verdict,
            self.segments_checked,
            self.wall_seconds,
            self.worst_segment
                .as_ref()
                .map(|w| format!(" worst: {w}"))
                .unwrap_or_default()
        )
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema: String,
    pub claim_id: String,
    pub gamma: String,
    pub verdict: Verdict,
    pub enclosures: Vec<(String, [String; 2])>,
    pub segments_checked: usize,
    pub worst_segment: Option<String>,
    pub wall_seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&ClaimReport> for ReportDoc {
    fn from(r: &ClaimReport) -> ReportDoc {
        ReportDoc {
            schema: SCHEMA.to_string(),
            claim_id: r.claim_id.clone(),
            gamma: format!("[{}, {}]", r.gamma.lo(), r.gamma.hi()),
            verdict: r.verdict,
            enclosures: r
                .enclosures
                .iter()
                .map(|(name, iv)| (name.clone(), [iv.lo().to_string(), iv.hi().to_string()]))
                .collect(),
            segments_checked: r.segments_checked,
            worst_segment: r.worst_segment.clone(),
            wall_seconds: r.wall_seconds,
            notes: r.notes.clone(),
        }
    }
}

pub fn to_json(report: &ClaimReport) -> String {
    serde_json::to_string_pretty(&ReportDoc::from(report)).expect("report serialization")
}

/// Write the report as a new timestamped file under `dir`; never overwrites.
pub fn write_report(report: &ClaimReport, dir: &Path) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let mut path = dir.join(format!("fc-report-{}-{nanos}.json", report.claim_id));
    let mut bump = 0u32;
    while path.exists() {
        bump += 1;
        path = dir.join(format!("fc-report-{}-{nanos}-{bump}.json", report.claim_id));
    }
    std::fs::write(&path, to_json(report))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_lattice() {
        use Verdict::*;
        assert_eq!(Certified.combine(Certified), Certified);
        assert_eq!(Certified.combine(NotReached), NotReached);
        assert_eq!(NotReached.combine(Failed), Failed);
        assert_eq!(Failed.combine(Certified), Failed);
        assert_eq!(Certified.exit_code(), 0);
        assert_eq!(Failed.exit_code(), 1);
        assert_eq!(NotReached.exit_code(), 2);
    }

    #[test]
    fn json_schema_fields() {
        let report = ClaimReport {
            claim_id: "gamma-bounds".into(),
            gamma: Interval::new(0.2484195, 0.2484196).unwrap(),
            verdict: Verdict::Certified,
            enclosures: vec![("F1-low".into(), Interval::new(4e-8, 5e-8).unwrap())],
            segments_checked: 0,
            worst_segment: None,
            wall_seconds: 0.25,
            notes: vec![],
        };
        let json = to_json(&report);
        let doc: ReportDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc.schema, "fc-report/1");
        assert_eq!(doc.verdict, Verdict::Certified);
        assert_eq!(doc.enclosures.len(), 1);
        let lo: f64 = doc.enclosures[0].1[0].parse().unwrap();
        assert_eq!(lo, 4e-8);
    }

    #[test]
    fn report_files_append_only() {
        let dir = std::env::temp_dir().join(format!("fc-report-test-{}", std::process::id()));
        let report = ClaimReport {
            claim_id: "test".into(),
            gamma: Interval::new(0.0, 0.0).unwrap(),
            verdict: Verdict::Failed,
            enclosures: vec![],
            segments_checked: 1,
            worst_segment: Some("seg".into()),
            wall_seconds: 0.0,
            notes: vec![],
        };
        let a = write_report(&report, &dir).unwrap();
        let b = write_report(&report, &dir).unwrap();
        assert_ne!(a, b);
        std::fs::remove_dir_all(&dir).ok();
    }
}
