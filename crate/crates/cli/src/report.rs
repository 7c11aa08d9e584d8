use crate::config::SuiteConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    AtMost,
    AtLeast,
    Equals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The statement being checked, or `plumbing`.
    pub paper_anchor: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub comparison: Comparison,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    fn new(name: &str, anchor: &str, measured: f64, comparison: Comparison, tolerance: f64) -> Self {
        let ok = match comparison {
            Comparison::AtMost => measured <= tolerance,
            Comparison::AtLeast => measured >= tolerance,
            Comparison::Equals => measured == tolerance,
        };
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: measured.is_finite().then_some(measured),
            comparison,
            tolerance,
            note: None,
        }
    }

    pub fn at_most(name: &str, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, measured, Comparison::AtMost, tolerance)
    }

    pub fn at_least(name: &str, anchor: &str, measured: f64, floor: f64) -> Self {
        Self::new(name, anchor, measured, Comparison::AtLeast, floor)
    }

    pub fn equals(name: &str, anchor: &str, measured: f64, expected: f64) -> Self {
        Self::new(name, anchor, measured, Comparison::Equals, expected)
    }

    /// A check whose computation itself failed.
    pub fn errored(name: &str, anchor: &str, comparison: Comparison, tolerance: f64, error: impl ToString) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            status: Status::Fail,
            measured: None,
            comparison,
            tolerance,
            note: Some(error.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    pub wall_time_s: f64,
    pub config: SuiteConfig,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub data: Value,
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(CheckRecord::at_most("a", "plumbing", 1e-12, 1e-10).passed());
        assert!(!CheckRecord::at_most("a", "plumbing", f64::NAN, 1e-10).passed());
        assert!(CheckRecord::at_least("b", "plumbing", 0.5, 1e-3).passed());
        assert!(!CheckRecord::equals("c", "plumbing", 1.0, -1.0).passed());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
