//! Run configuration: flags (or their environment variables) override a flat
//! `key = value` config file, which overrides the defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const MAX_DIM: usize = 64;
pub const MAX_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(format!("unknown format {s:?} (expected json, csv or text)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Text => "text",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub d_min: usize,
    pub d_max: usize,
    /// Unitarity, Hermiticity and orthonormality residuals.
    pub tol_unit: f64,
    /// Basis actions, group relations and gate identities.
    pub tol_action: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            d_min: 2,
            d_max: 16,
            tol_unit: 1e-10,
            tol_action: 1e-10,
            format: OutputFormat::Text,
            out: None,
            seed: 20020412,
        }
    }
}

/// Values supplied on the command line (or through the matching environment variables).
#[derive(Clone, Debug, Default)]
pub struct ConfigOverrides {
    pub d_min: Option<usize>,
    pub d_max: Option<usize>,
    pub tol_unit: Option<f64>,
    pub tol_action: Option<f64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("config line {line}: invalid value {value:?} for {key}")))
}

/// Parses the flat `key = value` format. `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<ConfigOverrides, ConfigError> {
    let mut o = ConfigOverrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {line}: expected key = value")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "dmin" => o.d_min = Some(parse_value(key, value, line)?),
            "dmax" => o.d_max = Some(parse_value(key, value, line)?),
            "tol-unit" => o.tol_unit = Some(parse_value(key, value, line)?),
            "tol-action" => o.tol_action = Some(parse_value(key, value, line)?),
            "format" => {
                o.format = Some(value.parse().map_err(|e| ConfigError(format!("config line {line}: {e}")))?)
            }
            "out" => o.out = Some(PathBuf::from(value)),
            "seed" => o.seed = Some(parse_value(key, value, line)?),
            _ => return Err(ConfigError(format!("config line {line}: unknown key {key:?}"))),
        }
    }
    Ok(o)
}

impl CliConfig {
    /// Merges flags over the optional config file over the defaults, then validates.
    pub fn resolve(flags: &ConfigOverrides, file: Option<&Path>) -> Result<CliConfig, ConfigError> {
        let from_file = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => ConfigOverrides::default(),
        };
        let base = CliConfig::default();
        let config = CliConfig {
            d_min: flags.d_min.or(from_file.d_min).unwrap_or(base.d_min),
            d_max: flags.d_max.or(from_file.d_max).unwrap_or(base.d_max),
            tol_unit: flags.tol_unit.or(from_file.tol_unit).unwrap_or(base.tol_unit),
            tol_action: flags.tol_action.or(from_file.tol_action).unwrap_or(base.tol_action),
            format: flags.format.or(from_file.format).unwrap_or(base.format),
            out: flags.out.clone().or(from_file.out),
            seed: flags.seed.or(from_file.seed).unwrap_or(base.seed),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(2 <= self.d_min && self.d_min <= self.d_max && self.d_max <= MAX_DIM) {
            return Err(ConfigError(format!(
                "dimension range must satisfy 2 <= dmin <= dmax <= {MAX_DIM} (got dmin={}, dmax={})",
                self.d_min, self.d_max
            )));
        }
        for (name, tol) in [("tol-unit", self.tol_unit), ("tol-action", self.tol_action)] {
            if !(tol > 0.0 && tol <= MAX_TOLERANCE) {
                return Err(ConfigError(format!("{name} must lie in (0, 1e-6], got {tol:e}")));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> std::ops::RangeInclusive<usize> {
        self.d_min..=self.d_max
    }
}
