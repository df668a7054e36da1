use std::path::PathBuf;

use clap::Args;
use fracspde::greens::{write_kernel_csv, Kernel, KernelKind};
use fracspde::FractionalOrder;
use serde::Serialize;

use super::Status;
use crate::error::{CliError, FlagContext, Result};
use crate::manifest::Recorder;
use crate::values::Values;

#[derive(Debug, Args, Serialize)]
pub struct KernelArgs {
    /// y, z1 or z2.
    #[arg(long, default_value = "y")]
    pub kind: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Times, as a list or lo:hi:n.
    #[arg(long)]
    pub t_range: Values,
    /// Positions along the first axis, as a list or lo:hi:n.
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Values,
    /// CSV destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &KernelArgs, rec: &mut Recorder) -> Result<Status> {
    let kind: KernelKind = args.kind.parse().flag("--kind")?;
    let alpha = FractionalOrder::new(args.alpha).flag("--alpha")?;
    if !(1..=3).contains(&args.dim) {
        return Err(CliError::flag("--dim", format!("{} not in 1..=3", args.dim)));
    }
    let kernel = Kernel::new(kind, alpha, args.dim).flag("--kind")?;
    let times = args.t_range.points();
    if let Some(t) = times.iter().find(|t| **t <= 0.0) {
        return Err(CliError::flag("--t-range", format!("{t} is not positive")));
    }
    let points: Vec<Vec<f64>> = args
        .x_range
        .points()
        .into_iter()
        .map(|x| {
            let mut p = vec![0.0; args.dim];
            p[0] = x;
            p
        })
        .collect();
    let mut csv = Vec::new();
    write_kernel_csv(&kernel, &times, &points, &mut csv)?;
    rec.emit(args.out.as_deref(), &csv)?;
    Ok(Status::Ok)
}
