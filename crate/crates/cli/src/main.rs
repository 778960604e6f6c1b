//! `hardylab`: batch front end for the hardylab-core toolkit.
//!
//! Every command prints a JSON report on stdout and, with `--out DIR`, also
//! writes its reports and CSV tables there. Exit codes: 0 success, 2 domain
//! error, 1 I/O, format or usage error. Errors go to stderr as
//! `{"error": kind, "message": text}`.

mod commands;
mod config;
mod json;
mod reproduce;
mod source;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hardylab_core::LabError;

use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "hardylab", version, about = "Approximate units, zero sets and Toeplitz diagnostics for bounded analytic functions")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Number of grid nodes (power of two, at least 256).
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    /// Command tolerance (see each command).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Directory for reports and CSV tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Outer function with log-modulus log|f| (registry name) or the real part of a CSV.
    SynthOuter {
        #[arg(long = "f")]
        f: Option<String>,
    },
    /// Inner-outer factorization of boundary samples.
    Factorize {
        #[arg(long = "f")]
        f: Option<String>,
    },
    /// Essential zero set and continuity at each zero (`--tol`: extension tolerance).
    Zeroset {
        #[arg(long = "f")]
        f: Option<String>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        widths: Option<Vec<f64>>,
    },
    /// Szego distances dist(1, f·P_M) (`--tol`: density threshold).
    Density {
        #[arg(long = "f")]
        f: Option<String>,
        #[arg(long = "M", value_delimiter = ',')]
        orders: Option<Vec<usize>>,
    },
    /// Dimension of the kernel of the adjoint of the M×M Toeplitz truncation (`--tol`: relative singular value cut).
    ToeplitzKernel {
        #[arg(long = "f")]
        f: Option<String>,
        #[arg(long = "M")]
        order: usize,
    },
    /// One approximate unit of I(f).
    ApproxUnit {
        #[arg(long = "f")]
        f: Option<String>,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Approximate-unit certificate for the ideal generated by the `--f` functions (`--tol`: certificate tolerance).
    Certify {
        #[arg(long = "f")]
        f: Vec<String>,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        #[arg(long)]
        bound: Option<f64>,
        /// Also write every unit as a CSV under `--out`.
        #[arg(long)]
        dump_units: bool,
    },
    /// Membership of `--g` in the ideal generated by the `--f` functions.
    Member {
        #[arg(long = "f")]
        f: Vec<String>,
        #[arg(long = "g")]
        g: Option<String>,
    },
    /// Analytic-prime check: with ess inf |a| > delta and a·b in I, is b in I?
    PrimeCheck {
        #[arg(long = "f")]
        f: Vec<String>,
        #[arg(long = "a")]
        a: Option<String>,
        #[arg(long = "b")]
        b: Option<String>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Writes a reproduction bundle for a named example.
    Reproduce { name: String },
}

impl Command {
    fn flags(&self, global: &GlobalArgs) -> RunConfig {
        let mut c = RunConfig {
            grid_size: global.grid_size,
            tol: global.tol,
            out: global.out.clone(),
            ..RunConfig::default()
        };
        match self {
            Command::SynthOuter { f } | Command::Factorize { f } | Command::ToeplitzKernel { f, .. } => {
                c.functions = f.iter().cloned().collect();
            }
            Command::Zeroset { f, eps, widths } => {
                c.functions = f.iter().cloned().collect();
                c.eps_schedule = eps.clone();
                c.width_schedule = widths.clone();
            }
            Command::Density { f, orders } => {
                c.functions = f.iter().cloned().collect();
                c.orders = orders.clone();
            }
            Command::ApproxUnit { f, strategy, stage } => {
                c.functions = f.iter().cloned().collect();
                c.strategy = strategy.clone();
                c.stage = *stage;
            }
            Command::Certify { f, strategy, schedule, bound, .. } => {
                c.functions = f.clone();
                c.strategy = strategy.clone();
                c.schedule = schedule.clone();
                c.bound = *bound;
            }
            Command::Member { f, g } => {
                c.functions = f.clone();
                c.g = g.clone();
            }
            Command::PrimeCheck { f, a, b, delta } => {
                c.functions = f.clone();
                c.a = a.clone();
                c.b = b.clone();
                c.delta = *delta;
            }
            Command::Reproduce { .. } => {}
        }
        c
    }
}

// a closed pipe on stdout is not an error worth reporting
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn report_error(kind: &str, message: &str) {
    let body = serde_json::json!({"error": kind, "message": message});
    eprintln!("{body}");
}

fn write_files(dir: &Path, files: &[(PathBuf, String)]) -> Result<(), LabError> {
    for (rel, text) in files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, text)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), LabError> {
    let base = match &cli.global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = base.merged(cli.command.flags(&cli.global))?;
    let output = match &cli.command {
        Command::Reproduce { name } => reproduce::run(name, &cfg)?,
        cmd => commands::run(cmd, &cfg)?,
    };
    let out_dir = cfg.out.clone().or(output.default_dir.clone());
    if let Some(dir) = out_dir {
        write_files(&dir, &output.files)?;
    }
    emit(&output.report);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            emit(&e.to_string());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("Usage", e.to_string().trim());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            ExitCode::from(if e.is_domain() { 2 } else { 1 })
        }
    }
}
