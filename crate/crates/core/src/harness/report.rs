//! Verification reports and their JSON / CSV forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::io::{to_canonical_json, write_text};

pub type Values = BTreeMap<String, f64>;

/// Non-finite values serialize as `null`; read them back as NaN.
fn lenient_values<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Values, D::Error> {
    let raw = BTreeMap::<String, Option<f64>>::deserialize(d)?;
    Ok(raw.into_iter().map(|(k, v)| (k, v.unwrap_or(f64::NAN))).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    #[serde(deserialize_with = "lenient_values")]
    pub inputs: Values,
    #[serde(deserialize_with = "lenient_values")]
    pub measured: Values,
    #[serde(deserialize_with = "lenient_values")]
    pub bounds: Values,
    pub pass: bool,
}

impl Case {
    pub fn new(label: impl Into<String>) -> Self {
        Case {
            label: label.into(),
            inputs: Values::new(),
            measured: Values::new(),
            bounds: Values::new(),
            pass: true,
        }
    }

    pub fn input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.to_owned(), value);
        self
    }

    pub fn measured(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.to_owned(), value);
        self
    }

    pub fn bound(mut self, key: &str, value: f64) -> Self {
        self.bounds.insert(key.to_owned(), value);
        self
    }

    /// A case passes only if `ok` holds and every measured value is finite.
    pub fn check(mut self, ok: bool) -> Self {
        self.pass = ok && self.measured.values().all(|v| v.is_finite());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass_count: usize,
    pub fail_count: usize,
    #[serde(deserialize_with = "lenient_values")]
    pub constants: Values,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, cases: Vec<Case>, mut constants: Values) -> Self {
        constants.retain(|_, v| v.is_finite());
        let pass_count = cases.iter().filter(|c| c.pass).count();
        VerificationReport {
            suite: suite.into(),
            summary: Summary {
                pass_count,
                fail_count: cases.len() - pass_count,
                constants,
            },
            cases,
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.fail_count == 0
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One row per case. Columns are `suite,case,label,pass` followed by the
    /// sorted union of `inputs.*`, `measured.*` and `bounds.*` keys.
    pub fn to_csv(&self) -> String {
        let mut columns = BTreeSet::new();
        for c in &self.cases {
            for (prefix, map) in [("inputs", &c.inputs), ("measured", &c.measured), ("bounds", &c.bounds)] {
                columns.extend(map.keys().map(|k| format!("{prefix}.{k}")));
            }
        }
        let mut out = String::from("suite,case,label,pass");
        for col in &columns {
            out.push(',');
            out.push_str(&csv_field(col));
        }
        out.push('\n');
        for (i, c) in self.cases.iter().enumerate() {
            write!(out, "{},{i},{},{}", csv_field(&self.suite), csv_field(&c.label), c.pass).unwrap();
            for col in &columns {
                let (prefix, key) = col.split_once('.').unwrap();
                let map = match prefix {
                    "inputs" => &c.inputs,
                    "measured" => &c.measured,
                    _ => &c.bounds,
                };
                out.push(',');
                if let Some(v) = map.get(key) {
                    write!(out, "{v:.16e}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidArgument(format!("unknown report format `{other}`"))),
        }
    }
}

pub fn emit_report(report: &VerificationReport, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Json => report.to_json()?,
        ReportFormat::Csv => report.to_csv(),
    };
    write_text(path, &text)
}
