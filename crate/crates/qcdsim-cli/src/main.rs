// Copyright 2026 qcdsim contributors
// SPDX-License-Identifier: Apache-2.0

//! qcdsim command line: simulate C-Matrix snapshots, scan the witness and
//! non-classicality surfaces, report platform presets, cross-check the
//! analytic solver against the truncated-Fock oracle, and evaluate Wigner
//! functions of stored states.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage/config error.

mod commands;
mod config;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { code: 2, msg: msg.into() }
    }
    pub fn numerical(err: impl std::fmt::Display) -> Self {
        CliError { code: 1, msg: err.to_string() }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Ode,
    Perturbative,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleArg {
    Off,
    Check,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichState {
    Reduced,
    Minus,
    Plus,
}

#[derive(Parser)]
#[command(name = "qcdsim", version, about = "Qubit-controlled displacements in a thermal Markovian environment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the C-Matrix on a grid at the configured times and write tables.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, value_enum)]
        oracle: Option<OracleArg>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Scan (N_a, g0 t) and emit the witness/metric table as CSV.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        oracle: Option<OracleArg>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the raw and normalized parameters of a platform preset.
    Platform { name: String },
    /// Run the analytic-vs-oracle comparison at configuration scale.
    OracleCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Evaluate the Wigner function of a stored state at one point.
    Wigner {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        alpha_re: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_im: f64,
        #[arg(long, value_enum, default_value_t = WhichState::Reduced)]
        which: WhichState,
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// Precedence: --threads flag, then QCDSIM_THREADS, then the config file.
fn configure_threads(flag: Option<usize>, from_config: Option<usize>) {
    let n = flag
        .or_else(|| std::env::var("QCDSIM_THREADS").ok().and_then(|v| v.parse().ok()))
        .or(from_config);
    if let Some(n) = n {
        // A pool can only be installed once per process; later calls are moot.
        let _ = qcdsim::configure_threads(n);
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, out, method, oracle, threads } => {
            let mut cfg = config::load(&config)?;
            configure_threads(threads, cfg.threads);
            if let Some(m) = method {
                cfg.method = match m {
                    MethodArg::Auto => qcdsim::phase_space::SolveMethod::Auto,
                    MethodArg::Ode => qcdsim::phase_space::SolveMethod::Ode,
                    MethodArg::Perturbative => qcdsim::phase_space::SolveMethod::Perturbative,
                };
            }
            if let Some(o) = oracle {
                cfg.oracle = match o {
                    OracleArg::Off => config::OracleMode::Off,
                    OracleArg::Check => config::OracleMode::Check,
                    OracleArg::Full => config::OracleMode::Full,
                };
            }
            if let Some(o) = out {
                cfg.output = Some(o);
            }
            commands::simulate(&cfg)
        }
        Command::Scan { config, out, oracle, threads } => {
            let mut cfg = config::load(&config)?;
            configure_threads(threads, cfg.threads);
            if let Some(o) = oracle {
                cfg.oracle = match o {
                    OracleArg::Off => config::OracleMode::Off,
                    OracleArg::Check => config::OracleMode::Check,
                    OracleArg::Full => config::OracleMode::Full,
                };
            }
            if let Some(o) = out {
                cfg.output = Some(o);
            }
            commands::scan(&cfg)
        }
        Command::Platform { name } => commands::platform(&name),
        Command::OracleCheck { config, threads } => {
            let cfg = config::load(&config)?;
            configure_threads(threads, cfg.threads);
            commands::oracle_check(&cfg)
        }
        Command::Wigner { state, alpha_re, alpha_im, which, extent, tol } => {
            let which = match which {
                WhichState::Reduced => commands::Which::Reduced,
                WhichState::Minus => commands::Which::Minus,
                WhichState::Plus => commands::Which::Plus,
            };
            commands::wigner_point(&state, qcdsim::C64::new(alpha_re, alpha_im), which, extent, tol)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
