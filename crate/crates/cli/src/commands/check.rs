use std::path::PathBuf;

use clap::Args;
use fracspde::chaos::{check_conditions, phase_sweep, write_phase_csv, ConvergenceInputs, Family};
use fracspde::noise::{NoiseSpec, TimeKernel};
use fracspde::FractionalOrder;
use serde::Serialize;

use super::Status;
use crate::error::{CliError, FlagContext, Result};
use crate::manifest::Recorder;
use crate::values::Values;

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// α, or the α axis of a sweep.
    #[arg(long)]
    pub alpha: Values,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// fractional, riesz or bessel.
    #[arg(long)]
    pub kernel: String,
    /// Hurst indices H_1..H_d; in a sweep, the isotropic H axis.
    #[arg(long, conflicts_with = "kappa")]
    pub hurst: Option<Values>,
    /// κ, or the κ axis of a sweep.
    #[arg(long)]
    pub kappa: Option<Values>,
    /// Horizon T of the moment bound.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Emit a phase-diagram CSV over alpha × (hurst | kappa).
    #[arg(long)]
    pub sweep: bool,
    /// Destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parameter(args: &CheckArgs, family: Family) -> Result<&Values> {
    match family {
        Family::Fractional => args
            .hurst
            .as_ref()
            .ok_or_else(|| CliError::flag("--hurst", "required for the fractional kernel")),
        Family::Riesz | Family::Bessel => args
            .kappa
            .as_ref()
            .ok_or_else(|| CliError::flag("--kappa", "required for riesz and bessel kernels")),
    }
}

pub fn run(args: &CheckArgs, rec: &mut Recorder) -> Result<Status> {
    let family: Family = args.kernel.parse().flag("--kernel")?;
    if !(args.t > 0.0 && args.t.is_finite()) {
        return Err(CliError::flag("--t", format!("{} is not positive", args.t)));
    }
    if !(1..=3).contains(&args.dim) {
        return Err(CliError::flag("--dim", format!("{} not in 1..=3", args.dim)));
    }
    let param = parameter(args, family)?;
    let param_flag = if family == Family::Fractional { "--hurst" } else { "--kappa" };
    if args.sweep {
        let alphas = args.alpha.points();
        for a in &alphas {
            FractionalOrder::new(*a).flag("--alpha")?;
        }
        let points = phase_sweep(family, args.dim, &alphas, &param.points(), args.t).flag(param_flag)?;
        let mut csv = Vec::new();
        write_phase_csv(&points, &mut csv)?;
        rec.emit(args.out.as_deref(), &csv)?;
        return Ok(Status::Ok);
    }
    let alpha = FractionalOrder::new(args.alpha.single("--alpha")?).flag("--alpha")?;
    let space = match family {
        Family::Fractional => {
            let h = param.points();
            if h.len() != args.dim {
                return Err(CliError::flag("--hurst", format!("expected {} values, got {}", args.dim, h.len())));
            }
            fracspde::noise::SpaceKernel::Fractional { hurst: h }
        }
        _ => family.kernel(param.single("--kappa")?, args.dim),
    };
    let noise = NoiseSpec::new(TimeKernel::Constant { c: 1.0 }, space, args.dim);
    let inputs = ConvergenceInputs::new(alpha, noise, args.t).flag(param_flag)?;
    let report = check_conditions(&inputs)?;
    let mut json = serde_json::to_vec_pretty(&report)?;
    json.push(b'\n');
    rec.emit(args.out.as_deref(), &json)?;
    Ok(Status::Ok)
}
