use std::path::PathBuf;

use clap::Args;
use fracspde::greens::{verify_envelope, DominationReport, EnvelopeParams, GridSpec, KernelKind};
use fracspde::quadcheck::{default_suite, dirichlet_grid, dirichlet_simplex, Resolution, ScalingReport, SLOPE_TOLERANCE};
use fracspde::{FractionalOrder, Regime};
use rayon::prelude::*;
use serde::Serialize;

use super::Status;
use crate::error::{CliError, FlagContext, Result};
use crate::manifest::Recorder;
use crate::values::Values;

/// Shift added to ζ in the control runs; a sound check must reject it.
const CONTROL_SHIFT: f64 = 0.25;
const SIMPLEX_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Allowed |fitted - predicted| exponent gap in the scaling checks.
    #[arg(long, default_value_t = SLOPE_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value = "0.75,1.5")]
    pub alpha: Values,
    #[arg(long, default_value = "1,2")]
    pub dim: Values,
    /// Gauss–Legendre panels per piece in the scaling checks.
    #[arg(long, default_value_t = Resolution::default().panels)]
    pub panels: usize,
    /// JSON destination; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ControlReport {
    shift: f64,
    report: DominationReport,
    /// True when the perturbed envelope was rejected.
    detected: bool,
}

#[derive(Debug, Serialize)]
struct SimplexReport {
    n: usize,
    h: f64,
    t: f64,
    numeric: f64,
    closed_form: f64,
    rel_error: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct SuiteReport {
    tolerance: f64,
    envelope: Vec<DominationReport>,
    controls: Vec<ControlReport>,
    scaling: Vec<ScalingReport>,
    simplex: Vec<SimplexReport>,
    failures: usize,
    pass: bool,
}

fn dims(values: &Values) -> Result<Vec<usize>> {
    values
        .points()
        .into_iter()
        .map(|d| {
            if d.fract() == 0.0 && (1.0..=3.0).contains(&d) {
                Ok(d as usize)
            } else {
                Err(CliError::flag("--dim", format!("{d} not in 1..=3")))
            }
        })
        .collect()
}

pub fn run(args: &VerifyArgs, rec: &mut Recorder) -> Result<Status> {
    if !(args.tolerance > 0.0 && args.tolerance.is_finite()) {
        return Err(CliError::flag("--tolerance", format!("{} is not positive", args.tolerance)));
    }
    if args.panels < 2 {
        return Err(CliError::flag("--panels", format!("{} (need at least 2)", args.panels)));
    }
    let mut cases = Vec::new();
    for a in args.alpha.points() {
        let alpha = FractionalOrder::new(a).flag("--alpha")?;
        for d in dims(&args.dim)? {
            cases.push((KernelKind::Y, alpha, d));
            cases.push((KernelKind::Z1, alpha, d));
            if alpha.regime() == Regime::Super {
                cases.push((KernelKind::Z2, alpha, d));
            }
        }
    }
    let grid = GridSpec::default();
    let runs = cases
        .par_iter()
        .map(|&(kind, alpha, d)| {
            let params = EnvelopeParams::for_kernel(kind, alpha, d)?;
            let report = verify_envelope(kind, &params, &grid, true)?;
            let perturbed = verify_envelope(kind, &params.with_zeta_shift(CONTROL_SHIFT), &grid, true)?;
            Ok((
                report,
                ControlReport {
                    shift: CONTROL_SHIFT,
                    detected: !perturbed.pass,
                    report: perturbed,
                },
            ))
        })
        .collect::<fracspde::Result<Vec<_>>>()?;
    let (envelope, controls): (Vec<_>, Vec<_>) = runs.into_iter().unzip();

    let mut scaling = default_suite(Resolution::with_panels(args.panels))?;
    for r in &mut scaling {
        r.tolerance = args.tolerance;
        r.pass = r.residual <= args.tolerance;
    }

    let simplex = dirichlet_grid()
        .par_iter()
        .map(|&(n, h, t)| {
            let c = dirichlet_simplex(n, h, t)?;
            let rel_error = c.rel_error();
            Ok(SimplexReport {
                n: c.n,
                h: c.h,
                t: c.t,
                numeric: c.numeric,
                closed_form: c.closed_form,
                rel_error,
                pass: rel_error <= SIMPLEX_TOLERANCE,
            })
        })
        .collect::<fracspde::Result<Vec<_>>>()?;

    let failures = envelope.iter().filter(|r| !r.pass).count()
        + controls.iter().filter(|c| !c.detected).count()
        + scaling.iter().filter(|r| !r.pass).count()
        + simplex.iter().filter(|r| !r.pass).count();
    let report = SuiteReport {
        tolerance: args.tolerance,
        envelope,
        controls,
        scaling,
        simplex,
        failures,
        pass: failures == 0,
    };
    let mut json = serde_json::to_vec_pretty(&report)?;
    json.push(b'\n');
    rec.emit(args.out.as_deref(), &json)?;
    Ok(if report.pass { Status::Ok } else { Status::Failed })
}
