//! Normalized Hecke eigenvalue tables.
//!
//! File format: an optional `# coverage: N` comment, then a header line
//! `p,lambda` (normalized eigenvalues) or `p,a_raw` (integer Fourier
//! coefficients, normalized here by `p^((weight-1)/2)`), then one
//! `prime,value` row per line in ascending order. Lines starting with `#`
//! are comments. Without a coverage comment the coverage bound is the last
//! prime listed; every prime up to the bound must be present.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::primes::primes_in_range;

/// Slack allowed on the Deligne bound for values normalized from raw integers.
const DELIGNE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    weight: u32,
    coverage: u64,
    entries: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Lambda,
    Raw,
}

impl CoefficientTable {
    /// Builds a table from `(p, lambda(p))` pairs and validates it.
    pub fn new(weight: u32, coverage: u64, entries: Vec<(u64, f64)>) -> Result<Self> {
        check_weight(weight)?;
        let rows: Vec<(usize, u64, f64)> = entries
            .into_iter()
            .enumerate()
            .map(|(i, (p, v))| (i + 1, p, v))
            .collect();
        validate(weight, Some(coverage), rows)
    }

    /// `lambda(p) = tau(p) / p^(11/2)` for every prime up to the table length.
    pub fn from_tau(tau: &[i128]) -> Result<Self> {
        let limit = tau.len().saturating_sub(1) as u64;
        let primes = primes_in_range(2, limit.max(2))?.primes;
        let entries = primes
            .into_iter()
            .filter(|&p| p <= limit)
            .map(|p| (p, tau[p as usize] as f64 / (p as f64).powf(5.5)))
            .collect();
        Self::new(12, limit, entries)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Largest `x` for which every prime `p <= x` has an entry.
    pub fn coverage(&self) -> u64 {
        self.coverage
    }

    pub fn entries(&self) -> &[(u64, f64)] {
        &self.entries
    }

    pub fn lambda(&self, p: u64) -> Option<f64> {
        self.entries
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Serializes in the normalized `p,lambda` format.
    pub fn to_text(&self) -> String {
        let mut out = format!("# coverage: {}\np,lambda\n", self.coverage);
        for &(p, v) in &self.entries {
            let _ = writeln!(out, "{p},{v:.16e}");
        }
        out
    }
}

fn check_weight(weight: u32) -> Result<()> {
    if weight == 0 || weight % 2 == 1 {
        return Err(Error::Domain(format!(
            "weight must be a positive even integer, got {weight}"
        )));
    }
    Ok(())
}

/// Reads a coefficient file.
pub fn load_coefficients(path: impl AsRef<Path>, weight: u32) -> Result<CoefficientTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_coefficients(&text, weight)
}

/// Parses coefficient-file text.
pub fn parse_coefficients(text: &str, weight: u32) -> Result<CoefficientTable> {
    check_weight(weight)?;
    let mut column = None;
    let mut declared = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = parse_coverage_comment(comment) {
                declared = Some(v.map_err(|message| Error::Format {
                    line: line_no,
                    message,
                })?);
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::Format {
                line: line_no,
                message: format!("expected two comma-separated fields, got {}", fields.len()),
            });
        }
        let Some(col) = column else {
            column = Some(match (fields[0], fields[1]) {
                ("p", "lambda") => Column::Lambda,
                ("p", "a_raw") => Column::Raw,
                _ => {
                    return Err(Error::Format {
                        line: line_no,
                        message: format!("unknown header `{line}`; expected `p,lambda` or `p,a_raw`"),
                    })
                }
            });
            continue;
        };
        let p: u64 = fields[0].parse().map_err(|_| Error::Format {
            line: line_no,
            message: format!("`{}` is not a non-negative integer", fields[0]),
        })?;
        let value: f64 = fields[1].parse().map_err(|_| Error::Format {
            line: line_no,
            message: format!("`{}` is not a number", fields[1]),
        })?;
        if !value.is_finite() {
            return Err(Error::Format {
                line: line_no,
                message: format!("non-finite value `{}`", fields[1]),
            });
        }
        let lambda = match col {
            Column::Lambda => value,
            Column::Raw => value / (p as f64).powf((weight as f64 - 1.0) / 2.0),
        };
        rows.push((line_no, p, lambda));
    }
    if column.is_none() {
        return Err(Error::Format {
            line: text.lines().count().max(1),
            message: "missing `p,lambda` or `p,a_raw` header".into(),
        });
    }
    validate(weight, declared, rows)
}

fn parse_coverage_comment(comment: &str) -> Option<std::result::Result<u64, String>> {
    let rest = comment.trim().strip_prefix("coverage")?;
    let rest = rest.trim_start().strip_prefix([':', '='])?.trim();
    Some(
        rest.parse()
            .map_err(|_| format!("bad coverage bound `{rest}`")),
    )
}

fn validate(
    weight: u32,
    declared: Option<u64>,
    rows: Vec<(usize, u64, f64)>,
) -> Result<CoefficientTable> {
    let Some(&(_, last_p, _)) = rows.last() else {
        return Err(Error::Format {
            line: 1,
            message: "no coefficient rows".into(),
        });
    };
    let max_p = rows.iter().map(|r| r.1).max().unwrap_or(last_p);
    let coverage = declared.unwrap_or(last_p);
    let primes = primes_in_range(2, max_p.max(coverage).max(2))?.primes;

    let mut prev = 0u64;
    for &(line, p, lambda) in &rows {
        if primes.binary_search(&p).is_err() {
            return Err(Error::Format {
                line,
                message: format!("{p} is not prime"),
            });
        }
        if p <= prev {
            return Err(Error::Format {
                line,
                message: format!("{p} does not follow {prev} in ascending order"),
            });
        }
        if lambda.abs() > 2.0 + DELIGNE_SLACK {
            return Err(Error::DeligneBound { p, value: lambda.abs() });
        }
        prev = p;
    }

    let entries: Vec<(u64, f64)> = rows
        .into_iter()
        .map(|(_, p, l)| (p, l.clamp(-2.0, 2.0)))
        .collect();
    let mut listed = entries.iter().map(|e| e.0).peekable();
    for &q in primes.iter().take_while(|&&q| q <= coverage) {
        if listed.next_if_eq(&q).is_none() {
            return Err(Error::Gap { p: q, coverage });
        }
    }
    Ok(CoefficientTable {
        weight,
        coverage,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunc::tau::tau_table;

    #[test]
    fn parses_normalized_rows() {
        let t = parse_coefficients("p,lambda\n2,-0.5303\n3,0.5987\n", 12).unwrap();
        assert_eq!(t.coverage(), 3);
        assert_eq!(t.lambda(3), Some(0.5987));
        assert_eq!(t.lambda(5), None);
    }

    #[test]
    fn normalizes_raw_integers() {
        let t = parse_coefficients("# delta\np,a_raw\n2,-24\n3,252\n5,4830\n", 12).unwrap();
        let tau = tau_table(5).unwrap();
        let from_tau = CoefficientTable::from_tau(&tau).unwrap();
        for p in [2, 3, 5] {
            let a = t.lambda(p).unwrap();
            let b = from_tau.lambda(p).unwrap();
            assert!((a - b).abs() < 1e-15, "p = {p}");
        }
        assert!((t.lambda(2).unwrap() - (-24.0 / 2f64.powf(5.5))).abs() < 1e-15);
    }

    #[test]
    fn deligne_violation_names_prime() {
        let err = parse_coefficients("p,lambda\n2,2.5\n", 12).unwrap_err();
        assert_eq!(err, Error::DeligneBound { p: 2, value: 2.5 });
    }

    #[test]
    fn composite_index_is_format_error() {
        let err = parse_coefficients("p,lambda\n2,0.1\n3,0.2\n4,0.1\n", 12).unwrap_err();
        match err {
            Error::Format { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("not prime"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn descending_index_is_format_error() {
        let err = parse_coefficients("p,lambda\n3,0.1\n2,0.1\n", 12).unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }));
    }

    #[test]
    fn gaps_are_reported() {
        let err = parse_coefficients("p,lambda\n2,0.1\n5,0.1\n", 12).unwrap_err();
        assert_eq!(err, Error::Gap { p: 3, coverage: 5 });
        let err = parse_coefficients("# coverage: 10\np,lambda\n2,0.1\n3,0.1\n5,0.1\n", 12)
            .unwrap_err();
        assert_eq!(err, Error::Gap { p: 7, coverage: 10 });
    }

    #[test]
    fn header_and_weight_are_checked() {
        assert!(matches!(
            parse_coefficients("n,value\n2,0.1\n", 12),
            Err(Error::Format { line: 1, .. })
        ));
        assert!(matches!(
            parse_coefficients("2,0.1\n", 12),
            Err(Error::Format { .. })
        ));
        assert!(matches!(
            parse_coefficients("p,lambda\n2,0.1\n", 11),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            parse_coefficients("p,lambda\n", 12),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let tau = tau_table(500).unwrap();
        let t = CoefficientTable::from_tau(&tau).unwrap();
        let back = parse_coefficients(&t.to_text(), 12).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn loads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("delta.csv");
        std::fs::write(&path, "p,a_raw\n2,-24\n3,252\n").unwrap();
        let t = load_coefficients(&path, 12).unwrap();
        assert_eq!(t.entries().len(), 2);
        assert!(matches!(
            load_coefficients(dir.path().join("missing.csv"), 12),
            Err(Error::Io(_))
        ));
    }
}
