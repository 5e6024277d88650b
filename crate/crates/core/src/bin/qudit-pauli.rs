use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qudit_pauli::cli::{
    self, CliConfig, ConfigOverrides, OutputFormat, Outcome, Perturbation, DEFAULT_LIMIT_DIMS, DEFAULT_WINDOW,
    EXIT_USAGE,
};

#[derive(Parser)]
#[command(name = "qudit-pauli", version, about = "Generalized Pauli group checks, qudit circuits and phase-operator diagnostics")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Flat key=value file with defaults for the flags below.
    #[arg(long, global = true, env = "QUDIT_PAULI_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "QUDIT_PAULI_DMIN")]
    dmin: Option<usize>,
    #[arg(long, global = true, env = "QUDIT_PAULI_DMAX")]
    dmax: Option<usize>,
    /// json, csv or text.
    #[arg(long, global = true, env = "QUDIT_PAULI_FORMAT")]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "QUDIT_PAULI_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "QUDIT_PAULI_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true, env = "QUDIT_PAULI_TOL_UNIT")]
    tol_unit: Option<f64>,
    #[arg(long, global = true, env = "QUDIT_PAULI_TOL_ACTION")]
    tol_action: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every invariant for each dimension in [dmin, dmax].
    Verify {
        /// Write each realization as JSON into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Corrupt one operator entry first: kind:op:row:col[:delta].
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Parse and execute a .qc circuit file.
    Run { circuit: PathBuf },
    /// Multiplication table of the phase-free Pauli elements.
    Table { d: usize },
    /// Number-phase commutator on the lowest Fock states.
    Limit {
        /// a..b or a comma-separated list.
        #[arg(long)]
        d_list: Option<String>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
    },
}

fn resolve(global: &GlobalArgs) -> Result<CliConfig, String> {
    let format = match &global.format {
        Some(f) => Some(f.parse::<OutputFormat>()?),
        None => None,
    };
    let flags = ConfigOverrides {
        d_min: global.dmin,
        d_max: global.dmax,
        tol_unit: global.tol_unit,
        tol_action: global.tol_action,
        format,
        out: global.out.clone(),
        seed: global.seed,
    };
    CliConfig::resolve(&flags, global.config.as_deref()).map_err(|e| e.to_string())
}

fn dispatch(command: &Command, config: &CliConfig) -> Outcome {
    let usage = |message: String| Outcome { code: EXIT_USAGE, report: String::new(), diagnostics: message };
    match command {
        Command::Verify { dump, perturb } => {
            let perturbation = match perturb.as_deref().map(str::parse::<Perturbation>).transpose() {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            cli::cmd_verify(config, perturbation.as_ref(), dump.as_deref())
        }
        Command::Run { circuit } => cli::cmd_run(circuit, config),
        Command::Table { d } => cli::cmd_table(*d, config),
        Command::Limit { d_list, window } => {
            let dims = match d_list.as_deref().map(cli::parse_dim_list).transpose() {
                Ok(d) => d.unwrap_or_else(|| DEFAULT_LIMIT_DIMS.to_vec()),
                Err(e) => return usage(e.to_string()),
            };
            cli::cmd_limit(&dims, *window, config)
        }
    }
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let config = match resolve(&args.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qudit-pauli: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let outcome = dispatch(&args.command, &config);
    if !outcome.diagnostics.is_empty() {
        eprint!("{}", outcome.diagnostics);
    }
    if !outcome.report.is_empty() {
        let written = match &config.out {
            Some(path) => std::fs::write(path, &outcome.report),
            None => std::io::stdout().write_all(outcome.report.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("qudit-pauli: cannot write report: {e}");
            return ExitCode::from(cli::EXIT_FAILURE);
        }
    }
    ExitCode::from(outcome.code)
}
