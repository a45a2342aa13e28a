//! `--config` files and x-grid specifications.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Keys accepted in a config file; each mirrors the flag of the same name.
pub const CONFIG_KEYS: &[&str] = &[
    "instance",
    "d",
    "coeff-f",
    "coeff-g",
    "weight",
    "tau-n",
    "leading",
    "kind",
    "xs",
    "out",
    "format",
    "threads",
    "pmax",
    "umax",
    "xmax",
    "tol",
    "in",
    "column",
    "x",
    "t-max",
];

/// Flat `key = value` settings; `#` starts a comment line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected `key = value`", i + 1))
            })?;
            let key = key.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{key}`",
                    i + 1
                )));
            }
            let value = value.trim().trim_matches('"').to_string();
            if values.insert(key.clone(), value).is_some() {
                return Err(CliError::Usage(format!(
                    "config line {}: duplicate key `{key}`",
                    i + 1
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}")))
            })
            .transpose()
    }

    /// The flag value when given, else the file value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// Parses `start:stop:log10`, `start:stop:log10/N` (N points per decade) or
/// a comma-separated list. The grid must be ascending with every x >= 2.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| CliError::Usage(format!("grid `{spec}`: {msg}"));
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| bad(format!("`{}`: {e}", s.trim())))
    };
    let xs: Vec<f64> = match spec.split(':').collect::<Vec<_>>().as_slice() {
        [start, stop, spacing] => {
            let (start, stop) = (num(start)?, num(stop)?);
            let per_decade = match spacing.trim() {
                "log10" => 1,
                s => s
                    .strip_prefix("log10/")
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| bad(format!("unknown spacing `{s}`")))?,
            };
            if !(start > 0.0 && stop >= start && stop.is_finite()) {
                return Err(bad("need 0 < start <= stop".into()));
            }
            let steps = (per_decade as f64 * (stop / start).log10() + 1e-9).floor() as i32;
            (0..=steps)
                .map(|i| {
                    if i % per_decade as i32 == 0 {
                        start * 10f64.powi(i / per_decade as i32)
                    } else {
                        (start * 10f64.powf(i as f64 / per_decade as f64)).round()
                    }
                })
                .collect()
        }
        [_] => spec.split(',').map(num).collect::<Result<_, _>>()?,
        _ => return Err(bad("expected start:stop:spacing or a comma list".into())),
    };
    if xs.is_empty() {
        return Err(bad("empty grid".into()));
    }
    if let Some(x) = xs.iter().find(|&&x| !(x >= 2.0 && x.is_finite())) {
        return Err(bad(format!("x = {x} is below 2")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("values must be strictly ascending".into()));
    }
    Ok(xs)
}

/// Parses a nonnegative bound such as `1e8` into an integer.
pub fn parse_bound(s: &str) -> Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !(v >= 0.0 && v < u64::MAX as f64) {
        return Err(format!("`{s}` is not a valid bound"));
    }
    Ok(v.floor() as u64)
}
