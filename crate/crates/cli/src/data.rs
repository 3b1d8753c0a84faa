//! Points CSV: one point per row, comma separated, optional header row, optional
//! trailing integer label column.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;

pub struct Points {
    /// `D x N`, one column per row of the file.
    pub matrix: DMatrix<f64>,
    pub labels: Option<Vec<usize>>,
}

fn parse_error(path: &Path, message: String) -> CliError {
    CliError::Parse {
        path: path.to_owned(),
        message,
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| parse_error(path, e.to_string()))
}

/// Writes JSON to `out`, or to stdout when `out` is `None`.
pub fn emit_json<T: Serialize + ?Sized>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = varietal::formats::to_json_string(value)?;
    text.push('\n');
    match out {
        Some(path) => write_text(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Reads a points CSV. A first row that does not parse as numbers is taken to be
/// a header. With `labeled`, the last column holds nonnegative integer labels.
pub fn read_points(path: &Path, labeled: bool) -> Result<Points, CliError> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| parse_error(path, format!("row {line}: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, (usize, String)> = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or((col + 1, field.to_owned()))
            })
            .collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if rows.is_empty() && width.is_none() && line == 1 => {
                // Header row.
                width = Some(record.len());
                continue;
            }
            Err((col, field)) => {
                return Err(parse_error(
                    path,
                    format!("row {line}, column {col}: '{field}' is not a finite number"),
                ));
            }
        };
        match width {
            Some(w) if w != values.len() => {
                return Err(parse_error(
                    path,
                    format!("row {line}: expected {w} columns, found {}", values.len()),
                ));
            }
            _ => width = Some(values.len()),
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(parse_error(path, "no data rows".into()));
    }

    let labels = if labeled {
        let mut labels = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter_mut().enumerate() {
            let v = row.pop().expect("rows are nonempty");
            if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                return Err(parse_error(
                    path,
                    format!("row {}: label {v} is not a nonnegative integer", i + 1),
                ));
            }
            labels.push(v as usize);
        }
        Some(labels)
    } else {
        None
    };
    let dim = rows[0].len();
    if dim == 0 {
        return Err(parse_error(path, "rows have no coordinates".into()));
    }
    let matrix = DMatrix::from_fn(dim, rows.len(), |r, c| rows[c][r]);
    Ok(Points { matrix, labels })
}

/// Writes one point per row with a header, and a trailing label column when
/// labels are given.
pub fn write_points(
    path: &Path,
    points: &DMatrix<f64>,
    labels: Option<&[usize]>,
) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| parse_error(path, e.to_string());
    let mut header: Vec<String> = (0..points.nrows()).map(|i| format!("x{i}")).collect();
    if labels.is_some() {
        header.push("label".into());
    }
    writer.write_record(&header).map_err(csv_err)?;
    for (j, col) in points.column_iter().enumerate() {
        let mut record: Vec<String> = col.iter().map(|v| format!("{v:.16e}")).collect();
        if let Some(l) = labels {
            record.push(l[j].to_string());
        }
        writer.write_record(&record).map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| parse_error(path, e.to_string()))?;
    write_text(path, &String::from_utf8(bytes).expect("CSV output is UTF-8"))
}
