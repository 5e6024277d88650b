//! Command implementations shared by the `qudit-pauli` binary and its tests.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage, config
//! or parse error.

pub mod config;
pub mod verify;

use std::path::Path;

pub use config::{CliConfig, ConfigError, ConfigOverrides, OutputFormat};
pub use verify::{run_verify, Perturbation, VerifyReport};

use crate::circuit;
use crate::diagnostics::limit_study;
use crate::pauli::{multiplication_table, PauliElement};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

pub const TABLE_MAX_DIM: usize = 7;
pub const DEFAULT_LIMIT_DIMS: [usize; 5] = [4, 8, 16, 32, 64];
pub const DEFAULT_WINDOW: usize = 4;

/// What a command produced: the report body plus any diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub report: String,
    pub diagnostics: String,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome { code: EXIT_OK, report, diagnostics: String::new() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Outcome { code: EXIT_USAGE, report: String::new(), diagnostics: message.into() }
    }

    fn failure(message: impl Into<String>) -> Self {
        Outcome { code: EXIT_FAILURE, report: String::new(), diagnostics: message.into() }
    }
}

pub fn cmd_verify(config: &CliConfig, perturbation: Option<&Perturbation>, dump: Option<&Path>) -> Outcome {
    let mut diagnostics = String::new();
    if let Some(dir) = dump {
        match verify::dump_realizations(config, dir) {
            Ok(files) => diagnostics.push_str(&format!("wrote {} realization files to {}\n", files.len(), dir.display())),
            Err(e) => return Outcome::failure(format!("cannot dump realizations to {}: {e}", dir.display())),
        }
    }
    let report = run_verify(config, perturbation);
    for f in report.failures() {
        diagnostics.push_str(&format!(
            "invariant {} failed: worst residual {:.3e} at d={} (tolerance {:e})\n",
            f.name, f.worst_residual, f.worst_d, f.tolerance
        ));
    }
    let body = match config.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Text => report.to_text(),
    };
    Outcome { code: if report.passed { EXIT_OK } else { EXIT_FAILURE }, report: body, diagnostics }
}

pub fn cmd_run(path: &Path, config: &CliConfig) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let parsed = match circuit::parse(&text) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
    };
    let report = match circuit::execute(&parsed) {
        Ok(r) => r,
        Err(e) => return Outcome::failure(format!("{}: {e}", path.display())),
    };
    let body = match config.format {
        OutputFormat::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        OutputFormat::Csv => {
            let mut out = String::from("line,qudit,encoding,label,probability\n");
            for m in &report.measurements {
                for (label, p) in m.probabilities.iter().enumerate() {
                    out.push_str(&format!("{},{},{},{label},{p:.12e}\n", m.line, m.qudit, m.encoding));
                }
            }
            out
        }
        OutputFormat::Text => report.to_text(),
    };
    Outcome::ok(body)
}

fn table_word(p: &PauliElement) -> String {
    p.without_phase().to_string()
}

fn table_cell(p: &PauliElement) -> String {
    p.to_string()
}

pub fn cmd_table(d: usize, config: &CliConfig) -> Outcome {
    if !(2..=TABLE_MAX_DIM).contains(&d) {
        return Outcome::usage(format!("table dimension must be between 2 and {TABLE_MAX_DIM}, got {d}"));
    }
    let table = match multiplication_table(d) {
        Ok(t) => t,
        Err(e) => return Outcome::failure(e.to_string()),
    };
    let heads: Vec<String> = table[0].iter().map(|e| table_word(&e.col)).collect();
    let body = match config.format {
        OutputFormat::Json => {
            let rows: Vec<Vec<String>> =
                table.iter().map(|row| row.iter().map(|e| table_cell(&e.product)).collect()).collect();
            let phases: Vec<Vec<usize>> = table.iter().map(|row| row.iter().map(|e| e.product.phase()).collect()).collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "d": d,
                "elements": heads,
                "products": rows,
                "phase_exponents": phases,
            }))
            .expect("table serializes")
        }
        OutputFormat::Csv => {
            let mut out = format!("row\\col,{}\n", heads.join(","));
            for row in &table {
                let cells: Vec<String> = row.iter().map(|e| table_cell(&e.product)).collect();
                out.push_str(&format!("{},{}\n", table_word(&row[0].row), cells.join(",")));
            }
            out
        }
        OutputFormat::Text => {
            let width = table
                .iter()
                .flatten()
                .map(|e| table_cell(&e.product).len())
                .chain(heads.iter().map(String::len))
                .max()
                .unwrap_or(1);
            let mut out = format!("Pauli group products, d={d}, w = exp(2*pi*i/{d})\n");
            out.push_str(&format!("{:>width$} |", ""));
            for h in &heads {
                out.push_str(&format!(" {h:>width$}"));
            }
            out.push('\n');
            out.push_str(&"-".repeat((width + 1) * (heads.len() + 1) + 1));
            out.push('\n');
            for row in &table {
                out.push_str(&format!("{:>width$} |", table_word(&row[0].row)));
                for e in row {
                    out.push_str(&format!(" {:>width$}", table_cell(&e.product)));
                }
                out.push('\n');
            }
            out
        }
    };
    Outcome::ok(body)
}

/// Accepts `a..b` (inclusive) or a comma-separated list.
pub fn parse_dim_list(s: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = || ConfigError(format!("invalid dimension list {s:?} (expected a..b or a,b,c)"));
    let dims: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if dims.is_empty() {
        return Err(bad());
    }
    if let Some(d) = dims.iter().find(|&&d| !(2..=config::MAX_DIM).contains(&d)) {
        return Err(ConfigError(format!("dimension {d} outside 2..={}", config::MAX_DIM)));
    }
    Ok(dims)
}

pub fn cmd_limit(dims: &[usize], window: usize, config: &CliConfig) -> Outcome {
    let report = match limit_study(dims, window) {
        Ok(r) => r,
        Err(e @ crate::Error::Window { .. }) | Err(e @ crate::Error::InvalidDimension(_)) => {
            return Outcome::usage(e.to_string())
        }
        Err(e) => return Outcome::failure(e.to_string()),
    };
    let body = match config.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Text => report.to_text(),
    };
    Outcome::ok(body)
}
