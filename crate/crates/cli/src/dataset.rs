//! Dataset documents: hyperplanes, optional points and free-form metadata.
//!
//! The JSON writer prints every float with 17 significant digits, so
//! reading a written dataset and writing it again reproduces the bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use serde::de::{self, DeserializeSeed, Deserializer, SeqAccess, Visitor};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub d: usize,
    pub hyperplanes: Vec<Vec<f64>>,
    pub points: Option<Vec<Vec<f64>>>,
    pub metadata: BTreeMap<String, String>,
}

/// Rows that must all have the length of the first; a mismatch is reported
/// with the parser's line number.
struct Rows(Vec<Vec<f64>>);

/// One row, checked against the expected length while its own brackets are
/// being parsed so the error position points at that row.
struct Row {
    index: usize,
    expected: Option<usize>,
}

impl<'de> DeserializeSeed<'de> for Row {
    type Value = Vec<f64>;

    fn deserialize<D: Deserializer<'de>>(self, deserializer: D) -> Result<Vec<f64>, D::Error> {
        deserializer.deserialize_seq(self)
    }
}

impl<'de> Visitor<'de> for Row {
    type Value = Vec<f64>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a list of numbers")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<f64>, A::Error> {
        let mut row = Vec::new();
        while let Some(v) = seq.next_element::<f64>()? {
            row.push(v);
        }
        match self.expected {
            Some(e) if e != row.len() => Err(de::Error::custom(format!(
                "ragged rows: row {} has {} entries, row 1 has {e}",
                self.index + 1,
                row.len()
            ))),
            _ => Ok(row),
        }
    }
}

impl<'de> Deserialize<'de> for Rows {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rows, D::Error> {
        struct RowsVisitor;

        impl<'de> Visitor<'de> for RowsVisitor {
            type Value = Rows;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of numeric rows")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Rows, A::Error> {
                let mut rows: Vec<Vec<f64>> = Vec::new();
                loop {
                    let seed = Row { index: rows.len(), expected: rows.first().map(Vec::len) };
                    match seq.next_element_seed(seed)? {
                        Some(row) => rows.push(row),
                        None => return Ok(Rows(rows)),
                    }
                }
            }
        }

        deserializer.deserialize_seq(RowsVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    d: usize,
    hyperplanes: Rows,
    #[serde(default)]
    points: Option<Rows>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

fn float_row(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
    format!("[{}]", parts.join(", "))
}

impl Dataset {
    pub fn new(hyperplanes: Vec<Vec<f64>>) -> Result<Dataset, DatasetError> {
        let d = hyperplanes.first().map_or(0, Vec::len);
        let ds = Dataset { d, hyperplanes, points: None, metadata: BTreeMap::new() };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let bad = |m: String| Err(DatasetError::Invalid(m));
        if self.d == 0 {
            return bad("dimension d must be positive".into());
        }
        if self.hyperplanes.is_empty() {
            return bad("no hyperplanes".into());
        }
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.len() != self.d {
                return bad(format!("hyperplane {} has {} entries, d = {}", i + 1, h.len(), self.d));
            }
            if h.iter().any(|x| !x.is_finite()) {
                return bad(format!("hyperplane {} has a non-finite entry", i + 1));
            }
            if h.iter().all(|x| *x == 0.0) {
                return bad(format!("hyperplane {} is the zero vector", i + 1));
            }
        }
        for (i, p) in self.points.iter().flatten().enumerate() {
            if p.len() != self.d {
                return bad(format!("point {} has {} entries, d = {}", i + 1, p.len(), self.d));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return bad(format!("point {} has a non-finite entry", i + 1));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Dataset, DatasetError> {
        let raw: RawDataset = serde_json::from_str(text)?;
        let ds = Dataset {
            d: raw.d,
            hyperplanes: raw.hyperplanes.0,
            points: raw.points.map(|p| p.0),
            metadata: raw.metadata,
        };
        ds.validate()?;
        Ok(ds)
    }

    /// One hyperplane per row, no header.
    pub fn from_csv(text: &str) -> Result<Dataset, DatasetError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| DatasetError::Csv {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            if record.iter().all(str::is_empty) {
                continue;
            }
            let row = record
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| DatasetError::Csv { line, message: format!("not a number: {f:?}") }))
                .collect::<Result<Vec<f64>, _>>()?;
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(DatasetError::Csv {
                        line,
                        message: format!("ragged rows: {} entries, expected {}", row.len(), first.len()),
                    });
                }
            }
            rows.push(row);
        }
        Dataset::new(rows)
    }

    /// Reads JSON, or CSV when `csv` is set or the file ends in `.csv`.
    pub fn load(path: &Path, csv: bool) -> Result<Dataset, DatasetError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
        if csv || path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            Dataset::from_csv(&text)
        } else {
            Dataset::from_json(&text)
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"d\": {},", self.d);
        let rows = |out: &mut String, name: &str, rows: &[Vec<f64>], last: bool| {
            let _ = writeln!(out, "  \"{name}\": [");
            for (k, r) in rows.iter().enumerate() {
                let sep = if k + 1 == rows.len() { "" } else { "," };
                let _ = writeln!(out, "    {}{sep}", float_row(r));
            }
            let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
        };
        let has_points = self.points.is_some();
        let has_meta = !self.metadata.is_empty();
        rows(&mut out, "hyperplanes", &self.hyperplanes, !has_points && !has_meta);
        if let Some(p) = &self.points {
            rows(&mut out, "points", p, !has_meta);
        }
        if has_meta {
            let _ = writeln!(out, "  \"metadata\": {{");
            for (k, (key, value)) in self.metadata.iter().enumerate() {
                let sep = if k + 1 == self.metadata.len() { "" } else { "," };
                let key = serde_json::to_string(key).expect("strings serialize");
                let value = serde_json::to_string(value).expect("strings serialize");
                let _ = writeln!(out, "    {key}: {value}{sep}");
            }
            let _ = writeln!(out, "  }}");
        }
        let _ = writeln!(out, "}}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let mut ds = Dataset::new(vec![vec![0.1, -2.5e-300], vec![1.0 / 3.0, 7.0]]).unwrap();
        ds.points = Some(vec![vec![2.0, -3.0]]);
        ds.metadata.insert("source".into(), "unit \"test\"".into());
        let text = ds.to_json();
        let back = Dataset::from_json(&text).unwrap();
        assert_eq!(back, ds);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn ragged_json_reports_line() {
        let text = "{\n  \"d\": 2,\n  \"hyperplanes\": [\n    [1, 0],\n    [0, 1, 5]\n  ]\n}\n";
        let err = Dataset::from_json(text).unwrap_err().to_string();
        assert!(err.contains("ragged") && err.contains("line 5"), "{err}");
    }

    #[test]
    fn ragged_csv_reports_line() {
        let err = Dataset::from_csv("1,0\n0,1\n1,2,3\n").unwrap_err().to_string();
        assert!(err.starts_with("line 3:"), "{err}");
    }

    #[test]
    fn csv_import() {
        let ds = Dataset::from_csv("1, 0\n\n0.5,-2\n").unwrap();
        assert_eq!(ds.d, 2);
        assert_eq!(ds.hyperplanes, vec![vec![1.0, 0.0], vec![0.5, -2.0]]);
    }

    #[test]
    fn rejects_zero_and_mismatch() {
        assert!(Dataset::from_json(r#"{"d": 2, "hyperplanes": [[0, 0]]}"#).is_err());
        assert!(Dataset::from_json(r#"{"d": 3, "hyperplanes": [[1, 0]]}"#).is_err());
        assert!(Dataset::from_json(r#"{"d": 2, "hyperplanes": [[1, 0]], "points": [[1]]}"#).is_err());
    }
}
