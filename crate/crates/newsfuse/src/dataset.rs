//! Historical sales data: loading, validation, and row resampling.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::num::Real;
use crate::{Error, Result};

/// Immutable table of named numeric columns with a fixed row count.
///
/// All columns have the same length, at least two rows, and contain only
/// finite values. Resampling never mutates the source, so a dataset can be
/// shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<R: Real = f64> {
    names: Vec<String>,
    columns: Vec<Vec<R>>,
    n_rows: usize,
}

impl<R: Real> Dataset<R> {
    /// Builds a dataset from `(name, values)` pairs, validating the
    /// invariants: unique names, equal column lengths, at least two rows,
    /// finite values only.
    pub fn from_columns(columns: Vec<(String, Vec<R>)>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidInput(
                "dataset needs at least one column".into(),
            ));
        }
        let n_rows = columns[0].1.len();
        if n_rows < 2 {
            return Err(Error::InvalidInput(format!(
                "dataset needs at least 2 rows, got {n_rows}"
            )));
        }
        let mut names = Vec::with_capacity(columns.len());
        let mut cols = Vec::with_capacity(columns.len());
        for (name, values) in columns {
            if names.contains(&name) {
                return Err(Error::InvalidInput(format!(
                    "duplicate column name `{name}`"
                )));
            }
            if values.len() != n_rows {
                return Err(Error::InvalidInput(format!(
                    "column `{name}` has {} rows, expected {n_rows}",
                    values.len()
                )));
            }
            if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "column `{name}` has a non-finite value at row {bad}"
                )));
            }
            names.push(name);
            cols.push(values);
        }
        Ok(Self {
            names,
            columns: cols,
            n_rows,
        })
    }

    /// Loads a CSV file: a header of unique column names followed by one
    /// numeric field per column on every data line. Comma separated,
    /// optional surrounding whitespace, period decimal point, no quoting.
    /// Whitespace-only lines are skipped.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_csv(&text, path)
    }

    fn parse_csv(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Csv {
            path: path.to_path_buf(),
            line,
            message,
        };

        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| err(1, "zero data rows (file is empty)".into()))?;
        let mut names: Vec<String> = Vec::new();
        for field in header.split(',') {
            let name = field.trim();
            if name.is_empty() {
                return Err(err(header_line, "empty column name in header".into()));
            }
            if names.iter().any(|n| n == name) {
                return Err(err(header_line, format!("duplicate column name `{name}`")));
            }
            names.push(name.to_string());
        }

        let mut columns: Vec<Vec<R>> = vec![Vec::new(); names.len()];
        let mut n_rows = 0usize;
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(err(
                    line_no,
                    format!("expected {} fields, found {}", names.len(), fields.len()),
                ));
            }
            for (col, field) in fields.iter().enumerate() {
                let cell = field.trim();
                let value: f64 = cell.parse().map_err(|_| {
                    err(
                        line_no,
                        format!("column `{}`: invalid numeric value `{cell}`", names[col]),
                    )
                })?;
                if !value.is_finite() {
                    return Err(err(
                        line_no,
                        format!("column `{}`: non-finite value `{cell}`", names[col]),
                    ));
                }
                columns[col].push(R::from_f64(value).ok_or_else(|| {
                    err(
                        line_no,
                        format!("column `{}`: value `{cell}` not representable", names[col]),
                    )
                })?);
            }
            n_rows += 1;
        }
        if n_rows == 0 {
            return Err(err(header_line, "zero data rows".into()));
        }
        if n_rows < 2 {
            return Err(err(
                header_line,
                format!("dataset needs at least 2 rows, got {n_rows}"),
            ));
        }
        Ok(Self {
            names,
            columns,
            n_rows,
        })
    }

    /// Renders the dataset back to CSV text. Values use the shortest
    /// round-trip decimal representation, so a load/write/load cycle
    /// reproduces the data exactly.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.names.join(","));
        out.push('\n');
        for row in 0..self.n_rows {
            for (i, col) in self.columns.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", col[row]);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv_string()).map_err(|source| Error::Io {
            path: PathBuf::from(path),
            source,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_columns(&self) -> usize {
        self.names.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    /// Values of the named column.
    pub fn column(&self, name: &str) -> Result<&[R]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// New dataset whose row `k` is row `indices[k]` of this one. Column
    /// names and order are preserved.
    pub fn resample_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "resample needs at least 2 rows, got {}",
                indices.len()
            )));
        }
        for &index in indices {
            if index >= self.n_rows {
                return Err(Error::IndexOutOfRange {
                    index,
                    n_rows: self.n_rows,
                });
            }
        }
        let columns = self
            .columns
            .iter()
            .map(|col| indices.iter().map(|&i| col[i]).collect())
            .collect();
        Ok(Self {
            names: self.names.clone(),
            columns,
            n_rows: indices.len(),
        })
    }
}
