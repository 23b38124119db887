//! Run configuration: defaults, config-file values, and flag overrides
//! (flags win).

use qeuler_core::error::{Error, Result};
use qeuler_core::numerics::Precision;
use std::fs;
use std::path::Path;

/// Output rendering for reports and values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Canonical machine format.
    Json,
    /// Lossy flat export.
    Csv,
    /// Human-readable lines.
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            other => Err(format!("unknown format `{other}` (expected json, csv, or pretty)")),
        }
    }
}

/// Effective settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub precision_bits: usize,
    pub tol: f64,
    pub slack: f64,
    pub format: Format,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { precision_bits: 256, tol: 1e-40, slack: 10.0, format: Format::Pretty, jobs: 0 }
    }
}

impl RunConfig {
    /// Loads `key = value` lines; `#` starts a comment.
    pub fn load_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {} is not `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("config `{key}`: bad {what} `{value}`"));
            match key {
                "precision_bits" => {
                    cfg.precision_bits = value.parse().map_err(|_| bad("integer"))?
                }
                "tol" => cfg.tol = value.parse().map_err(|_| bad("number"))?,
                "slack" => cfg.slack = value.parse().map_err(|_| bad("number"))?,
                "jobs" => cfg.jobs = value.parse().map_err(|_| bad("integer"))?,
                "format" => {
                    cfg.format = value.parse().map_err(|e: String| Error::Parse(e))?
                }
                other => {
                    return Err(Error::Parse(format!("unknown config key `{other}`")));
                }
            }
        }
        Ok(cfg)
    }

    /// The numeric precision policy this configuration selects.
    pub fn precision(&self) -> Result<Precision> {
        Precision::new(self.precision_bits, self.tol)
    }
}
