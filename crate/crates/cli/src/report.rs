//! Experiment reports and the plain-text data files written next to them.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparator {
    /// `value ≥ threshold − tolerance`
    AtLeast,
    /// `value ≤ threshold + tolerance`
    AtMost,
    /// `|value − threshold| ≤ tolerance`
    Within,
}

/// One numeric claim checked against a declared threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub comparator: Comparator,
    pub threshold: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Routine that produced `value`.
    pub source: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        value: f64,
        comparator: Comparator,
        threshold: f64,
        tolerance: f64,
        source: impl Into<String>,
    ) -> Self {
        let passed = value.is_finite()
            && match comparator {
                Comparator::AtLeast => value >= threshold - tolerance,
                Comparator::AtMost => value <= threshold + tolerance,
                Comparator::Within => (value - threshold).abs() <= tolerance,
            };
        Self {
            name: name.into(),
            value,
            comparator,
            threshold,
            tolerance,
            passed,
            source: source.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub seed: u64,
    pub config: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub notes: Vec<String>,
    pub files: Vec<String>,
    /// Wall-clock seconds; the only field that varies between identical runs.
    pub runtime_seconds: f64,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The report as JSON with the runtime removed.
    pub fn deterministic_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("runtime_seconds");
        }
        v
    }
}

/// Collects output files under one directory and records their names.
pub struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.dir.join(name), bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Comma-separated table with a header row.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
        let mut s = header.join(",");
        s.push('\n');
        for r in rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        self.write_bytes(name, s.as_bytes())
    }

    /// Whitespace-separated columns with a `#` header, for gnuplot.
    pub fn dat(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
        let mut s = format!("# {}\n", header.join(" "));
        for r in rows {
            for (i, v) in r.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{v:.17e}");
            }
            s.push('\n');
        }
        self.write_bytes(name, s.as_bytes())
    }

    pub fn into_files(self) -> Vec<String> {
        self.files
    }
}

pub fn write_report(dir: &Path, report: &Report) -> io::Result<PathBuf> {
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
    fs::write(&path, text + "\n")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparators() {
        assert!(Check::new("a", 2.0, Comparator::AtLeast, 2.0, 0.0, "t").passed);
        assert!(!Check::new("a", 1.9, Comparator::AtLeast, 2.0, 0.05, "t").passed);
        assert!(Check::new("b", 2.1 + 5e-7, Comparator::AtMost, 2.1, 1e-6, "t").passed);
        assert!(Check::new("c", 1.0 + 1e-10, Comparator::Within, 1.0, 1e-9, "t").passed);
        assert!(!Check::new("d", f64::NAN, Comparator::AtMost, 1.0, 1.0, "t").passed);
    }

    #[test]
    fn data_files_are_recorded() {
        let tmp = tempfile::tempdir().unwrap();
        let mut a = Artifacts::new(tmp.path()).unwrap();
        a.csv("t.csv", &["x", "y"], &[vec![1.0, 2.0]]).unwrap();
        a.dat("t.dat", &["x", "y"], &[vec![1.0, 2.0]]).unwrap();
        let text = fs::read_to_string(tmp.path().join("t.dat")).unwrap();
        assert!(text.starts_with("# x y\n"));
        assert_eq!(a.into_files(), vec!["t.csv", "t.dat"]);
    }
}
