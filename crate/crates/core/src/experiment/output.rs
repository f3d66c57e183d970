use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Formats a real with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// An in-memory CSV table whose rows all start with the config hash.
#[derive(Clone, Debug)]
pub struct Table {
    pub file: &'static str,
    pub columns: &'static [&'static str],
    hash: String,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &'static str, columns: &'static [&'static str], hash: &str) -> Self {
        Self { file, columns, hash: hash.to_string(), rows: Vec::new() }
    }

    pub fn push_reals(&mut self, values: &[f64]) {
        self.push(values.iter().map(|v| fmt_real(*v)).collect());
    }

    /// Appends a row of preformatted cells (without the hash column).
    pub fn push(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        let mut row = Vec::with_capacity(cells.len() + 1);
        row.push(self.hash.clone());
        row.extend(cells);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, dir: &Path) -> Result<OutputEntry> {
        let path = dir.join(self.file);
        let mut w = csv::Writer::from_path(&path).map_err(csv_error)?;
        let header: Vec<&str> = std::iter::once("config_hash").chain(self.columns.iter().copied()).collect();
        w.write_record(&header).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(OutputEntry {
            file: self.file.to_string(),
            rows: self.rows.len(),
            columns: header.iter().map(|s| s.to_string()).collect(),
        })
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// One artifact listed in the manifest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub rows: usize,
    pub columns: Vec<String>,
}

pub fn write_json(dir: &Path, file: &str, value: &impl Serialize) -> Result<OutputEntry> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    std::fs::write(dir.join(file), text + "\n")?;
    Ok(OutputEntry { file: file.to_string(), rows: 0, columns: Vec::new() })
}
