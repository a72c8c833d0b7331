//! Coefficient and sample file formats.
//!
//! Both payloads share one JSON layout,
//!
//! ```json
//! {"degree":3,"coeffs":[[1.0,0.0],[0.0,0.0],[2.5,-1.0],[0.0,0.0]]}
//! ```
//!
//! with `degree + 1` `[re, im]` pairs. Sample sequences produced by the
//! transform additionally carry `"layout":"dyadic-blocks"` and
//! `"levels":N`, the top block level (`-1` for a lone `x_0`). Readers also
//! accept CSV lines `index,re,im` (missing indices are zero, an optional
//! header line is skipped). Writers emit compact JSON with every float in
//! 17-significant-digit scientific notation, so identical inputs produce
//! byte-identical files and parsing a file recovers every value exactly.

use std::fs;
use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::TaylorSeries;
use crate::error::{Error, Result};
use crate::transform::SampleSequence;

pub const DYADIC_LAYOUT: &str = "dyadic-blocks";

/// `serde_json` formatter writing floats as `{:.16e}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with [`FixedDigits`] floats and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[derive(Debug, Serialize, Deserialize)]
struct Payload {
    degree: usize,
    coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layout: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    levels: Option<i64>,
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|c| [c.re, c.im]).collect()
}

pub fn series_to_json(f: &TaylorSeries) -> Result<String> {
    to_canonical_json(&Payload {
        degree: f.degree(),
        coeffs: pairs(f.coeffs()),
        layout: None,
        levels: None,
    })
}

pub fn samples_to_json(x: &SampleSequence) -> Result<String> {
    to_canonical_json(&Payload {
        degree: x.values().len() - 1,
        coeffs: pairs(x.values()),
        layout: Some(DYADIC_LAYOUT.to_owned()),
        levels: Some(x.top_level().map_or(-1, i64::from)),
    })
}

/// Parses either payload format into plain values.
pub fn parse_values(text: &str) -> Result<Vec<Complex64>> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

fn parse_json(text: &str) -> Result<Vec<Complex64>> {
    let p: Payload = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if p.coeffs.len() != p.degree + 1 {
        return Err(Error::Parse(format!(
            "degree {} but {} coefficient pairs",
            p.degree,
            p.coeffs.len()
        )));
    }
    if let Some(layout) = &p.layout {
        if layout != DYADIC_LAYOUT {
            return Err(Error::Parse(format!("unknown layout `{layout}`")));
        }
        let len = p.coeffs.len();
        let expected = if len >= 2 && len.is_power_of_two() {
            len.trailing_zeros() as i64 - 1
        } else {
            -1
        };
        if p.levels != Some(expected) {
            return Err(Error::Parse(format!(
                "levels {:?} inconsistent with {len} samples",
                p.levels
            )));
        }
    }
    Ok(p.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

fn parse_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut entries: Vec<(usize, Complex64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [i, re, im] => i
                .parse::<usize>()
                .ok()
                .zip(re.parse::<f64>().ok())
                .zip(im.parse::<f64>().ok())
                .map(|((i, re), im)| (i, Complex64::new(re, im))),
            _ => None,
        };
        match parsed {
            Some(entry) => entries.push(entry),
            None if lineno == 0 && entries.is_empty() => continue,
            None => return Err(Error::Parse(format!("line {}: expected `index,re,im`", lineno + 1))),
        }
    }
    let len = entries.iter().map(|(i, _)| i + 1).max().unwrap_or(1);
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    let mut seen = vec![false; len];
    for (i, c) in entries {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Parse(format!("index {i} appears twice")));
        }
        values[i] = c;
    }
    Ok(values)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_series(path: &Path) -> Result<TaylorSeries> {
    TaylorSeries::new(parse_values(&read_text(path)?)?)
}

pub fn read_samples(path: &Path) -> Result<SampleSequence> {
    SampleSequence::new(parse_values(&read_text(path)?)?)
}

pub fn write_series(path: &Path, f: &TaylorSeries) -> Result<()> {
    write_text(path, &series_to_json(f)?)
}

pub fn write_samples(path: &Path, x: &SampleSequence) -> Result<()> {
    write_text(path, &samples_to_json(x)?)
}
