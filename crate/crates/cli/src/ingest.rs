//! Reading space specifications from files or inline text.

use std::fmt;
use std::path::{Path, PathBuf};

use cat0kit::spaces::TreeEdge;
use cat0kit::{make_space, SpaceSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// `{"kind": ..., ...}`
    JsonSpec,
    /// Header row of labels, then a symmetric body.
    DistanceMatrixCsv,
    /// Whitespace-separated `u v weight` lines.
    TreeEdgeList,
}

impl InputFormat {
    /// Inline text starting with `{` is JSON; files go by extension, and
    /// anything unrecognized is read as an edge list.
    pub fn infer(source: &str) -> InputFormat {
        if source.trim_start().starts_with('{') {
            return InputFormat::JsonSpec;
        }
        match Path::new(source).extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => InputFormat::JsonSpec,
            Some(e) if e.eq_ignore_ascii_case("csv") => InputFormat::DistanceMatrixCsv,
            _ => InputFormat::TreeEdgeList,
        }
    }
}

/// Where in the input a parse error happened. Lines and columns are
/// 1-based; CSV columns count fields rather than characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}:{at}: {message}")]
    Parse {
        origin: String,
        at: Location,
        message: String,
    },

    #[error("{origin}: {axiom} violated at ({})", witness.join(", "))]
    Axiom {
        origin: String,
        axiom: String,
        witness: Vec<String>,
    },
}

/// Reads and validates a space. `source` is a path, or an inline JSON spec
/// when it starts with `{`.
pub fn ingest_space(source: &str, format: InputFormat) -> Result<SpaceSpec, IngestError> {
    let (origin, text) = if source.trim_start().starts_with('{') {
        ("<inline>".to_string(), source.to_string())
    } else {
        let text = std::fs::read_to_string(source).map_err(|e| IngestError::Io {
            path: PathBuf::from(source),
            source: e,
        })?;
        (source.to_string(), text)
    };
    parse_space(&text, format, &origin)
}

/// Parses and validates text already in memory. `origin` names it in errors.
pub fn parse_space(
    text: &str,
    format: InputFormat,
    origin: &str,
) -> Result<SpaceSpec, IngestError> {
    let spec = match format {
        InputFormat::JsonSpec => parse_json(text, origin)?,
        InputFormat::DistanceMatrixCsv => parse_matrix_csv(text, origin)?,
        InputFormat::TreeEdgeList => parse_edge_list(text, origin)?,
    };
    validate(&spec, origin)?;
    Ok(spec)
}

fn validate(spec: &SpaceSpec, origin: &str) -> Result<(), IngestError> {
    match make_space(spec) {
        Ok(_) => Ok(()),
        Err(cat0kit::Error::Validation { axiom, witness }) => Err(IngestError::Axiom {
            origin: origin.to_string(),
            axiom,
            witness,
        }),
        Err(e) => Err(IngestError::Axiom {
            origin: origin.to_string(),
            axiom: e.to_string(),
            witness: vec![],
        }),
    }
}

fn parse_json(text: &str, origin: &str) -> Result<SpaceSpec, IngestError> {
    serde_json::from_str(text).map_err(|e| IngestError::Parse {
        origin: origin.to_string(),
        at: Location {
            line: e.line(),
            column: e.column(),
        },
        message: e.to_string(),
    })
}

fn parse_error(
    origin: &str,
    line: usize,
    column: usize,
    message: impl Into<String>,
) -> IngestError {
    IngestError::Parse {
        origin: origin.to_string(),
        at: Location { line, column },
        message: message.into(),
    }
}

/// A leading empty header cell marks a label column in every body row.
fn parse_matrix_csv(text: &str, origin: &str) -> Result<SpaceSpec, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| csv_error(origin, e))?,
        None => return Err(parse_error(origin, 1, 1, "empty matrix file")),
    };
    let row_labels = header.get(0) == Some("");
    let labels: Vec<String> = header
        .iter()
        .skip(usize::from(row_labels))
        .map(str::to_string)
        .collect();
    if labels.is_empty() {
        return Err(parse_error(origin, 1, 1, "header has no labels"));
    }
    let n = labels.len();
    let mut matrix = Vec::with_capacity(n);
    for record in records {
        let record = record.map_err(|e| csv_error(origin, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let expected = n + usize::from(row_labels);
        if record.len() != expected {
            return Err(parse_error(
                origin,
                line,
                record.len().min(expected) + 1,
                format!("expected {expected} fields, found {}", record.len()),
            ));
        }
        if row_labels && matrix.len() < n && record[0] != labels[matrix.len()] {
            let want = &labels[matrix.len()];
            return Err(parse_error(
                origin,
                line,
                1,
                format!("row label `{}` should be `{want}`", &record[0]),
            ));
        }
        let mut row = Vec::with_capacity(n);
        for (j, field) in record.iter().enumerate().skip(usize::from(row_labels)) {
            let v: f64 = field.parse().map_err(|_| {
                parse_error(origin, line, j + 1, format!("`{field}` is not a number"))
            })?;
            row.push(v);
        }
        matrix.push(row);
    }
    if matrix.len() != n {
        return Err(parse_error(
            origin,
            matrix.len() + 2,
            1,
            format!("expected {n} rows for {n} labels, found {}", matrix.len()),
        ));
    }
    Ok(SpaceSpec::DistanceMatrix { labels, matrix })
}

fn csv_error(origin: &str, e: csv::Error) -> IngestError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_error(origin, line, 1, e.to_string())
}

fn parse_edge_list(text: &str, origin: &str) -> Result<SpaceSpec, IngestError> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens = tokens_with_columns(line);
        match tokens.as_slice() {
            [] => continue,
            [(_, u), (_, v), (col, w)] => {
                let weight: f64 = w.parse().map_err(|_| {
                    parse_error(origin, i + 1, *col, format!("`{w}` is not a weight"))
                })?;
                edges.push(TreeEdge::new(*u, *v, weight));
            }
            _ => {
                let col = tokens.get(3).map_or(line.trim_end().len() + 1, |t| t.0);
                return Err(parse_error(
                    origin,
                    i + 1,
                    col,
                    format!("expected `u v weight`, found {} fields", tokens.len()),
                ));
            }
        }
    }
    if edges.is_empty() {
        return Err(parse_error(origin, 1, 1, "no edges"));
    }
    Ok(SpaceSpec::MetricTree { edges })
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}
