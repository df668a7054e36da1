use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fracspde::specfun::{mittag_leffler, wright_phi};
use fracspde::SeriesControl;
use serde::Serialize;

use super::Status;
use crate::error::{CliError, FlagContext, Result};
use crate::manifest::Recorder;
use crate::values::Values;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Function {
    /// φ(a, δ; -z) for a ∈ (-1, 0), z ≥ 0
    Wright,
    /// E_{a,b}(z)
    MittagLeffler,
}

#[derive(Debug, Args, Serialize)]
pub struct SpecfunArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    /// Two parameters: `a,δ` for wright, `a,b` for mittag-leffler.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Values,
    /// Arguments z, as a list or lo:hi:n.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Values,
    /// Relative series tolerance.
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_terms: usize,
    /// CSV destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &SpecfunArgs, rec: &mut Recorder) -> Result<Status> {
    let ctl = SeriesControl::new(args.tol, args.max_terms).flag("--tol")?;
    let (a, b) = match args.params.points().as_slice() {
        [a, b] => (*a, *b),
        p => return Err(CliError::flag("--params", format!("expected two values, got {}", p.len()))),
    };
    let mut csv = String::from("z,value\n");
    for z in args.range.points() {
        let v = match args.function {
            Function::Wright => wright_phi(a, b, z, ctl),
            Function::MittagLeffler => mittag_leffler(a, b, z, ctl),
        }
        .flag("--params")?;
        writeln!(csv, "{z:e},{v:e}").expect("write to String");
    }
    rec.emit(args.out.as_deref(), csv.as_bytes())?;
    Ok(Status::Ok)
}
