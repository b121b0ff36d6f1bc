//! Tabular experiment reports with claim verdicts and deterministic writers.
//!
//! A report is a small data table (parameter and result columns) plus a list
//! of pass/fail verdicts, each tied to one of the fixed claim labels the
//! acceptance suite checks. Reports serialize to CSV and JSON. File contents
//! are bit-reproducible across runs: everything volatile (wall-clock
//! runtime) is excluded from the files and only appears in the stdout
//! summary.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use serde::Serialize;

use crate::error::Result;

/// Schema tag stamped into every JSON report.
pub const REPORT_SCHEMA: &str = "steklov-report/v1";

/// The claims the acceptance suite checks. Every verdict in a report must
/// reference one of these labels, so downstream tooling can join reports to
/// claims without string guessing.
pub const CLAIM_LABELS: [&str; 12] = [
    "annulus-quadratic-exactness",
    "asymptotic-order",
    "normalized-comparison",
    "fem-exact-agreement",
    "tube-limit-monotonicity",
    "tube-limit-extrapolation",
    "weinstock-exceedance",
    "neck-nonconcentration",
    "cutoff-energy-decay",
    "bound-audit",
    "annulus-optimizer",
    "linalg-oracles",
];

/// One table cell. Floats render with 12 significant digits in text output;
/// JSON keeps full shortest-round-trip precision.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Float(x) => f.write_str(&format_significant(*x, 12)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    /// Numeric view: integers widen, text yields nothing.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

/// Pass/fail judgment of one claim. `margin` is the signed distance to the
/// pass threshold (positive means headroom); its exact meaning is
/// claim-specific and spelled out in `detail`.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
    pub margin: f64,
    pub detail: String,
}

/// A named experiment run: a parameter/result table, claim verdicts, and
/// stable metadata. `runtime` is excluded from all serialized output so that
/// re-running an experiment reproduces its report files byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<Verdict>,
    pub metadata: BTreeMap<String, String>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert(
            "version".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        );
        ExperimentReport {
            schema: REPORT_SCHEMA.to_string(),
            name: name.into(),
            columns: columns.iter().map(|c| (*c).to_string()).collect(),
            rows: Vec::new(),
            verdicts: Vec::new(),
            metadata,
            runtime: Duration::ZERO,
        }
    }

    /// Appends one row; its width must match the column count.
    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column count"
        );
        self.rows.push(row);
    }

    /// Records a verdict; `claim` must be one of [`CLAIM_LABELS`].
    pub fn push_verdict(&mut self, claim: &str, pass: bool, margin: f64, detail: impl Into<String>) {
        assert!(
            CLAIM_LABELS.contains(&claim),
            "unknown claim label `{claim}`"
        );
        self.verdicts.push(Verdict {
            claim: claim.to_string(),
            pass,
            margin,
            detail: detail.into(),
        });
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// The data table as CSV, header first, floats at 12 significant digits.
    pub fn rows_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("csv header");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_string))
                .expect("csv row");
        }
        finish_csv(w)
    }

    /// The verdicts as CSV: claim, pass, margin, detail.
    pub fn verdicts_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["claim", "pass", "margin", "detail"])
            .expect("csv header");
        for v in &self.verdicts {
            w.write_record([
                v.claim.clone(),
                v.pass.to_string(),
                format_significant(v.margin, 12),
                v.detail.clone(),
            ])
            .expect("csv row");
        }
        finish_csv(w)
    }

    /// The whole report (minus runtime) as pretty JSON.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human summary for standard output; this is where the runtime goes.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {} rows, {} verdicts, {:.2}s",
            self.name,
            self.rows.len(),
            self.verdicts.len(),
            self.runtime.as_secs_f64()
        );
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "  [{}] {} margin={} {}",
                if v.pass { "PASS" } else { "FAIL" },
                v.claim,
                format_significant(v.margin, 6),
                v.detail
            );
        }
        out
    }

    /// Writes `rows.csv`, `verdicts.csv`, and `report.json` into a fresh
    /// `<name>-<unix-seconds>` directory under `parent` and returns its
    /// path. Only the directory name varies between runs; the file contents
    /// are deterministic.
    pub fn write(&self, parent: &Path) -> Result<PathBuf> {
        let stamp = SystemTime::now()
            .duration_since(SystemTime::UNIX_EPOCH)
            .unwrap_or_default()
            .as_secs();
        let dir = parent.join(format!("{}-{stamp}", self.name));
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("rows.csv"), self.rows_csv())?;
        fs::write(dir.join("verdicts.csv"), self.verdicts_csv())?;
        fs::write(dir.join("report.json"), self.to_json())?;
        Ok(dir)
    }
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("csv flush to memory");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// Formats `x` with `digits` significant digits, trimming trailing zeros:
/// decimal notation for moderate exponents, scientific otherwise (the
/// `%.<N>g` convention). Twelve digits reconstruct a double closely enough
/// for regression diffs without full round-trip noise.
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits > 0, "need at least one significant digit");
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("scientific exponent");
    if exponent >= -4 && exponent < digits as i32 {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_fraction(mantissa.to_string()))
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting_matches_the_g_convention() {
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(2.5, 12), "2.5");
        assert_eq!(format_significant(-2.5, 12), "-2.5");
        assert_eq!(
            format_significant(9.963968667152777, 12),
            "9.96396866715"
        );
        assert_eq!(format_significant(0.0114, 12), "0.0114");
        assert_eq!(format_significant(1e-17, 12), "1e-17");
        assert_eq!(format_significant(1.5e-17, 3), "1.5e-17");
        assert_eq!(format_significant(123456.0, 3), "1.23e5");
        assert_eq!(format_significant(1234567890123.0, 12), "1.23456789012e12");
        // rounding can push the mantissa across a power of ten
        assert_eq!(format_significant(0.99999999999999, 12), "1");
        assert_eq!(format_significant(f64::INFINITY, 12), "inf");
    }

    #[test]
    fn csv_output_quotes_awkward_fields() {
        let mut r = ExperimentReport::new("demo", &["label", "value"]);
        r.push_row(vec!["plain".into(), 1.5.into()]);
        r.push_row(vec!["with, comma".into(), 2.0.into()]);
        let csv = r.rows_csv();
        assert!(csv.starts_with("label,value\n"));
        assert!(csv.contains("plain,1.5\n"));
        assert!(csv.contains("\"with, comma\",2\n"));
    }

    #[test]
    fn json_report_carries_schema_and_skips_runtime() {
        let mut r = ExperimentReport::new("demo", &["n", "value"]);
        r.push_row(vec![3u32.into(), 0.25.into()]);
        r.push_verdict("bound-audit", true, 0.5, "all below the bound");
        r.runtime = Duration::from_secs(7);
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert_eq!(v["rows"][0][0], 3);
        assert_eq!(v["verdicts"][0]["claim"], "bound-audit");
        assert!(!json.contains("runtime"));
    }

    #[test]
    fn report_files_land_in_a_stamped_directory() {
        let tmp = tempfile::tempdir().unwrap();
        let mut r = ExperimentReport::new("demo", &["x"]);
        r.push_row(vec![1.0.into()]);
        let dir = r.write(tmp.path()).unwrap();
        assert!(dir
            .file_name()
            .unwrap()
            .to_string_lossy()
            .starts_with("demo-"));
        for file in ["rows.csv", "verdicts.csv", "report.json"] {
            assert!(dir.join(file).is_file(), "missing {file}");
        }
        let again = ExperimentReport::new("demo", &["x"]);
        assert_ne!(again.rows_csv(), r.rows_csv());
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn mismatched_row_width_is_rejected() {
        let mut r = ExperimentReport::new("demo", &["a", "b"]);
        r.push_row(vec![1.0.into()]);
    }

    #[test]
    #[should_panic(expected = "unknown claim label")]
    fn unknown_claim_labels_are_rejected() {
        let mut r = ExperimentReport::new("demo", &["a"]);
        r.push_verdict("made-up-claim", true, 0.0, "");
    }
}
