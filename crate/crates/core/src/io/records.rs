//! Record-file ingest and export.
//!
//! Two formats carry the same rows of (model_id, seed, source, target,
//! accuracy, num_questions):
//!
//! - delimited text: UTF-8 CSV with a mandatory header; column order is
//!   free but the names are fixed;
//! - structured records: a JSON document with a schema version.
//!
//! Baseline rows use the literal, case-sensitive source value `BASELINE`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EvalRecord, Granularity, PerceptualLevel, Source, TaskSet, TaskSpec};

pub const RECORD_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    DelimitedText,
    StructuredRecords,
}

impl RecordFormat {
    /// Pick the format from a file extension: `.json` means structured
    /// records, anything else delimited text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::StructuredRecords,
            _ => Self::DelimitedText,
        }
    }
}

/// A record file on disk.
#[derive(Debug, Clone)]
pub struct RecordFile {
    pub format: RecordFormat,
    pub path: PathBuf,
}

impl RecordFile {
    pub fn at(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        Self {
            format: RecordFormat::from_path(&path),
            path,
        }
    }
}

/// Read and parse a record file according to its declared format.
pub fn parse_records(file: &RecordFile) -> Result<Vec<EvalRecord<f64>>> {
    let text = std::fs::read_to_string(&file.path)?;
    match file.format {
        RecordFormat::DelimitedText => parse_records_csv(&text),
        RecordFormat::StructuredRecords => parse_records_json(&text),
    }
}

const COLUMNS: [&str; 6] = [
    "model_id",
    "seed",
    "source",
    "target",
    "accuracy",
    "num_questions",
];

/// Parse delimited-text records. Every error carries the 1-based line
/// number of the offending row.
pub fn parse_records_csv(text: &str) -> Result<Vec<EvalRecord<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, name) in headers.iter().enumerate() {
        if !COLUMNS.contains(&name) {
            return Err(Error::UnknownColumn(name.to_string()));
        }
        index.insert(name, i);
    }
    for required in COLUMNS {
        if !index.contains_key(required) {
            return Err(Error::MissingColumn(required));
        }
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |name: &str| -> Result<&str> {
            row.get(index[name]).ok_or_else(|| Error::MalformedRow {
                line,
                message: format!("missing field {name:?}"),
            })
        };
        let model_id = field("model_id")?;
        if model_id.is_empty() {
            return Err(Error::MalformedRow {
                line,
                message: "empty model_id".into(),
            });
        }
        let seed: i64 = field("seed")?.parse().map_err(|_| Error::MalformedRow {
            line,
            message: format!("seed {:?} is not an integer", field("seed").unwrap_or("")),
        })?;
        let source = field("source")?;
        if source.is_empty() {
            return Err(Error::MalformedRow {
                line,
                message: "empty source".into(),
            });
        }
        let target = field("target")?;
        if target.is_empty() {
            return Err(Error::MalformedRow {
                line,
                message: "empty target".into(),
            });
        }
        let accuracy_raw = field("accuracy")?;
        let accuracy: f64 = accuracy_raw
            .parse()
            .map_err(|_| Error::NonNumericAccuracy {
                line,
                value: accuracy_raw.to_string(),
            })?;
        if !accuracy.is_finite() {
            return Err(Error::NonNumericAccuracy {
                line,
                value: accuracy_raw.to_string(),
            });
        }
        if !(0.0..=100.0).contains(&accuracy) {
            return Err(Error::AccuracyOutOfRange {
                line,
                value: accuracy,
            });
        }
        let num_questions: u32 =
            field("num_questions")?
                .parse()
                .map_err(|_| Error::MalformedRow {
                    line,
                    message: format!(
                        "num_questions {:?} is not a nonnegative integer",
                        field("num_questions").unwrap_or("")
                    ),
                })?;
        records.push(EvalRecord {
            model_id: model_id.to_string(),
            seed,
            source: Source::from_field(source),
            target: target.to_string(),
            accuracy,
            num_questions,
        });
    }
    Ok(records)
}

/// Serialize records as delimited text in canonical column order. Numbers
/// use the shortest representation that parses back bit-exact.
pub fn write_records_csv(records: &[EvalRecord<f64>]) -> String {
    let mut out = String::new();
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.model_id, r.seed, r.source, r.target, r.accuracy, r.num_questions
        ));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct RecordDocument {
    schema_version: u32,
    records: Vec<EvalRecord<f64>>,
}

/// Parse a structured-records JSON document.
pub fn parse_records_json(text: &str) -> Result<Vec<EvalRecord<f64>>> {
    let doc: RecordDocument = serde_json::from_str(text)?;
    if doc.schema_version != RECORD_SCHEMA_VERSION {
        return Err(Error::UnsupportedSchemaVersion {
            found: doc.schema_version,
            supported: RECORD_SCHEMA_VERSION,
        });
    }
    for (i, r) in doc.records.iter().enumerate() {
        if !(0.0..=100.0).contains(&r.accuracy) {
            return Err(Error::AccuracyOutOfRange {
                line: i as u64 + 1,
                value: r.accuracy,
            });
        }
    }
    Ok(doc.records)
}

/// Serialize records as a structured-records JSON document.
pub fn write_records_json(records: &[EvalRecord<f64>]) -> String {
    let doc = RecordDocument {
        schema_version: RECORD_SCHEMA_VERSION,
        records: records.to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("records serialize");
    out.push('\n');
    out
}

/// Parse a task-definition file: CSV with columns id, abbreviation,
/// perceptual_level (low|mid|high), granularity (pixel|crop|image).
pub fn parse_tasks_csv(text: &str) -> Result<TaskSet> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let expected = ["id", "abbreviation", "perceptual_level", "granularity"];
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, name) in headers.iter().enumerate() {
        if !expected.contains(&name) {
            return Err(Error::UnknownColumn(name.to_string()));
        }
        index.insert(name, i);
    }
    for required in expected {
        if !index.contains_key(required) {
            return Err(Error::MissingColumn(match required {
                "id" => "id",
                "abbreviation" => "abbreviation",
                "perceptual_level" => "perceptual_level",
                _ => "granularity",
            }));
        }
    }
    let mut tasks = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let get = |name: &str| row.get(index[name]).unwrap_or("");
        let level =
            PerceptualLevel::parse(get("perceptual_level")).ok_or_else(|| Error::MalformedRow {
                line,
                message: format!(
                    "perceptual_level {:?} is not one of low/mid/high",
                    get("perceptual_level")
                ),
            })?;
        let granularity =
            Granularity::parse(get("granularity")).ok_or_else(|| Error::MalformedRow {
                line,
                message: format!(
                    "granularity {:?} is not one of pixel/crop/image",
                    get("granularity")
                ),
            })?;
        tasks.push(TaskSpec::new(
            get("id"),
            get("abbreviation"),
            level,
            granularity,
        ));
    }
    TaskSet::new(tasks)
}
