use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fracspde::chaos::ChaosQuadrature;
use fracspde::duhamel::{
    deterministic_solve, mc_second_moment, pathwise_simulate, second_moment_chaos, GridField, MomentField,
    SimulationConfig,
};
use serde::Serialize;

use super::Status;
use crate::error::{CliError, Result};
use crate::manifest::{sibling, Recorder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Deterministic Duhamel solve with the configured forcing.
    Det,
    /// One pathwise realisation.
    Path,
    /// Monte Carlo moments next to the chaos series.
    Moment,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value = "det")]
    pub mode: Mode,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Overrides the seed in the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV destination; stdout if omitted. The JSON summary goes to `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn load_config(path: &std::path::Path) -> Result<SimulationConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })?;
    let config: SimulationConfig = serde_json::from_str(&text).map_err(|source| CliError::Config {
        path: path.display().to_string(),
        source,
    })?;
    config.validate()?;
    Ok(config)
}

#[derive(Serialize)]
struct FieldSummary<'a> {
    mode: Mode,
    scheme: fracspde::duhamel::Scheme,
    seed: Option<u64>,
    steps: usize,
    cells: usize,
    box_mass_outside: f64,
    final_min: f64,
    final_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

#[derive(Serialize)]
struct ChaosComparison {
    t: f64,
    x: f64,
    mc_second: f64,
    mc_half_width: f64,
    chaos_second: Option<f64>,
    chaos_order: usize,
    truncation_ratio: Option<f64>,
    chaos_error: Option<String>,
}

#[derive(Serialize)]
struct MomentSummary {
    mode: Mode,
    seed: u64,
    samples: usize,
    comparison: ChaosComparison,
}

fn field_summary(mode: Mode, field: &GridField) -> FieldSummary<'static> {
    let last = field.last_row();
    FieldSummary {
        mode,
        scheme: field.scheme,
        seed: field.seed,
        steps: field.times.len() - 1,
        cells: field.xs.len(),
        box_mass_outside: field.box_mass_outside,
        final_min: last.iter().copied().fold(f64::INFINITY, f64::min),
        final_max: last.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        note: (mode == Mode::Path).then_some("forward Riemann sum; moments differ from the Skorokhod solution"),
    }
}

fn moment_csv(m: &MomentField) -> String {
    let mut csv = String::from("t,x,mean,mean_ci,second,second_ci\n");
    for (i, t) in m.times.iter().enumerate() {
        for (j, x) in m.xs.iter().enumerate() {
            let (mean, mci) = m.mean_at(i, j);
            let (second, sci) = m.second_at(i, j);
            writeln!(csv, "{t:e},{x:e},{mean:e},{mci:e},{second:e},{sci:e}").expect("write to String");
        }
    }
    csv
}

/// Runs `config` as given; the caller applies `--seed`.
pub fn run(args: &SimulateArgs, config: &SimulationConfig, rec: &mut Recorder) -> Result<Status> {
    let summary = match args.mode {
        Mode::Det => {
            let forcing = config.forcing;
            let field = deterministic_solve(config, &|t, x, u| forcing.eval(t, x, u))?;
            let mut csv = Vec::new();
            field.write_csv(&mut csv)?;
            rec.emit(args.out.as_deref(), &csv)?;
            serde_json::to_vec_pretty(&field_summary(args.mode, &field))?
        }
        Mode::Path => {
            rec.set_seed(config.seed);
            let field = pathwise_simulate(config)?;
            let mut csv = Vec::new();
            field.write_csv(&mut csv)?;
            rec.emit(args.out.as_deref(), &csv)?;
            serde_json::to_vec_pretty(&field_summary(args.mode, &field))?
        }
        Mode::Moment => {
            if args.samples < 2 {
                return Err(CliError::flag("--samples", format!("{} (need at least 2)", args.samples)));
            }
            rec.set_seed(config.seed);
            let moments = mc_second_moment(config, args.samples)?;
            rec.emit(args.out.as_deref(), moment_csv(&moments).as_bytes())?;
            let m = moments.times.len() - 1;
            let j = moments.xs.len() / 2;
            let (t, x) = (moments.times[m], moments.xs[j]);
            let (mc_second, mc_half_width) = moments.second_at(m, j);
            let chaos = second_moment_chaos(config, t, x, &ChaosQuadrature::default());
            let comparison = ChaosComparison {
                t,
                x,
                mc_second,
                mc_half_width,
                chaos_second: chaos.as_ref().ok().map(|c| c.value),
                chaos_order: config.chaos_order,
                truncation_ratio: chaos.as_ref().ok().map(|c| c.truncation_ratio),
                chaos_error: chaos.err().map(|e| e.to_string()),
            };
            serde_json::to_vec_pretty(&MomentSummary {
                mode: args.mode,
                seed: config.seed,
                samples: args.samples,
                comparison,
            })?
        }
    };
    let mut summary = summary;
    summary.push(b'\n');
    match &args.out {
        Some(out) => rec.emit(Some(&sibling(out, "json")), &summary)?,
        None => eprintln!("{}", String::from_utf8_lossy(&summary).trim_end()),
    }
    Ok(Status::Ok)
}
