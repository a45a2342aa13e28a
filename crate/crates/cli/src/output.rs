//! Table rows, CSV/JSON encoding, and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use selmer_core::MertensReport;

use crate::CliError;

pub const CSV_HEADER: [&str; 8] = [
    "x",
    "value",
    "main_term",
    "constant",
    "residual",
    "rel_residual",
    "imag_residue",
    "elapsed_s",
];

/// One row of a `table` run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub x: f64,
    pub value: f64,
    pub main_term: f64,
    pub constant: f64,
    pub residual: f64,
    pub rel_residual: f64,
    pub imag_residue: f64,
    pub elapsed_s: f64,
}

impl From<&MertensReport> for Row {
    fn from(r: &MertensReport) -> Self {
        Self {
            x: r.x,
            value: r.value,
            main_term: r.main_term,
            constant: r.constant_used,
            residual: r.residual,
            rel_residual: r.rel_residual,
            imag_residue: r.imag_residue,
            elapsed_s: r.elapsed_seconds,
        }
    }
}

impl Row {
    fn fields(&self) -> [f64; 8] {
        [
            self.x,
            self.value,
            self.main_term,
            self.constant,
            self.residual,
            self.rel_residual,
            self.imag_residue,
            self.elapsed_s,
        ]
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn rows_to_csv(rows: &[Row]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record(row.fields().map(fmt_f64)).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Reads `(x, column)` pairs from a table written by [`rows_to_csv`].
pub fn read_column(path: &Path, column: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let headers = r.headers().map_err(|e| CliError::Io(e.to_string()))?.clone();
    let find = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Usage(format!("{}: no column `{name}`", path.display()))
        })
    };
    let (xi, ci) = (find("x")?, find(column)?);
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Io(e.to_string()))?;
        let get = |j: usize| -> Result<f64, CliError> {
            rec.get(j).unwrap_or("").trim().parse().map_err(|e| {
                CliError::Usage(format!("{} row {}: {e}", path.display(), i + 2))
            })
        };
        out.push((get(xi)?, get(ci)?));
    }
    Ok(out)
}

/// Writes `bytes` to `out` through a temporary file in the same directory,
/// renamed into place on success; stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(io)?;
            stdout.flush().map_err(io)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            tmp.write_all(bytes).map_err(io)?;
            tmp.persist(path)
                .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
            Ok(())
        }
    }
}
