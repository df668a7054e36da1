//! `fracspde` command line.
//!
//! Exit status: 0 on success, 1 on invalid input or a failed computation,
//! 2 when a verification report contains failures.

mod commands;
mod error;
mod manifest;
mod values;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{check, kernel, simulate, specfun, verify, Status};
use error::{CliError, Result};
use manifest::{sibling, write_manifest, Recorder};

const THREADS_ENV: &str = "FRACSPDE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fracspde", version, about = "Kernels, noise and moment checks for time-fractional stochastic diffusion")]
struct Cli {
    /// Worker threads; FRACSPDE_THREADS takes precedence. Defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Manifest destination. Defaults to `<out>.manifest.json`, or stderr
    /// when the payload goes to stdout.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the Wright or Mittag-Leffler function.
    Specfun(specfun::SpecfunArgs),
    /// Tabulate a Green's kernel as CSV.
    Kernel(kernel::KernelArgs),
    /// Check the existence conditions, or sweep them into a phase CSV.
    Check(check::CheckArgs),
    /// Deterministic, pathwise or moment simulation from a JSON config.
    Simulate(simulate::SimulateArgs),
    /// Envelope domination plus the integral and scaling checks.
    Verify(verify::VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Specfun(_) => "specfun",
            Command::Kernel(_) => "kernel",
            Command::Check(_) => "check",
            Command::Simulate(_) => "simulate",
            Command::Verify(_) => "verify",
        }
    }

    fn out(&self) -> Option<&Path> {
        match self {
            Command::Specfun(a) => a.out.as_deref(),
            Command::Kernel(a) => a.out.as_deref(),
            Command::Check(a) => a.out.as_deref(),
            Command::Simulate(a) => a.out.as_deref(),
            Command::Verify(a) => a.out.as_deref(),
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::flag("FRACSPDE_THREADS", format!("`{v}` is not a positive integer"))),
        },
        Err(_) => match flag {
            Some(0) => Err(CliError::flag("--threads", "must be at least 1")),
            n => Ok(n),
        },
    }
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(n) = thread_count(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Threads(e.to_string()))?;
    }
    let threads = rayon::current_num_threads();
    let name = cli.command.name();
    let manifest_path = cli
        .manifest
        .clone()
        .or_else(|| cli.command.out().map(|o| sibling(o, "manifest.json")));
    let (status, rec) = match &cli.command {
        Command::Specfun(a) => {
            let mut rec = Recorder::new(name, serde_json::to_value(a)?, threads);
            (specfun::run(a, &mut rec)?, rec)
        }
        Command::Kernel(a) => {
            let mut rec = Recorder::new(name, serde_json::to_value(a)?, threads);
            (kernel::run(a, &mut rec)?, rec)
        }
        Command::Check(a) => {
            let mut rec = Recorder::new(name, serde_json::to_value(a)?, threads);
            (check::run(a, &mut rec)?, rec)
        }
        Command::Simulate(a) => {
            let mut config = simulate::load_config(&a.config)?;
            if let Some(seed) = a.seed {
                config.seed = seed;
            }
            let echo = json!({ "args": a, "config": config });
            let mut rec = Recorder::new(name, echo, threads);
            (simulate::run(a, &config, &mut rec)?, rec)
        }
        Command::Verify(a) => {
            let mut rec = Recorder::new(name, serde_json::to_value(a)?, threads);
            (verify::run(a, &mut rec)?, rec)
        }
    };
    write_manifest(&rec.finish(), manifest_path.as_deref())?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => {
            eprintln!("fracspde: verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("fracspde: {e}");
            ExitCode::from(1)
        }
    }
}
