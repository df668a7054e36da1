//! Gaussian noise with covariance E[Ẇ(s,y)Ẇ(r,z)] = λ(s-r) Λ(y-z).

mod cells;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

pub use cells::{space_cell_cov, time_cell_cov};
pub use sampler::{sample_field, FieldSampler, NoiseField, NoiseGrid, UniformGrid, DEFAULT_CELL_CAP};

fn one() -> f64 {
    1.0
}

/// Spatial covariance Λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceKernel {
    /// ∏ 2H_i(2H_i - 1)|x_i|^{2H_i-2}
    Fractional { hurst: Vec<f64> },
    /// constant · |x|^{-κ}
    Riesz {
        kappa: f64,
        #[serde(default = "one")]
        constant: f64,
    },
    /// constant · ∫_0^∞ ω^{-κ/2-1} e^{-ω} e^{-|x|²/(4ω)} dω
    Bessel {
        kappa: f64,
        #[serde(default = "one")]
        constant: f64,
    },
}

/// Temporal covariance λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeKernel {
    /// λ ≡ c
    Constant { c: f64 },
    /// λ(t) = |t|^{-β}
    RieszTime { beta: f64 },
    /// λ(t) = e^{-rate·|t|}
    Exponential { rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub time: TimeKernel,
    pub space: SpaceKernel,
    pub d: usize,
    /// Multiplies the noise; the covariance scales with its square.
    #[serde(default = "one")]
    pub amplitude: f64,
}

impl NoiseSpec {
    pub fn new(time: TimeKernel, space: SpaceKernel, d: usize) -> Self {
        NoiseSpec {
            time,
            space,
            d,
            amplitude: 1.0,
        }
    }

    /// Errors with the first violation, if any.
    pub fn check(&self) -> Result<()> {
        match validate_spec(self).into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidParameter {
                name: v.parameter,
                reason: v.message,
            }),
        }
    }
}

/// A parameter outside its admissible range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub parameter: &'static str,
    pub message: String,
}

fn violation(parameter: &'static str, message: String) -> Violation {
    Violation { parameter, message }
}

pub fn validate_spec(spec: &NoiseSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = spec.d;
    if d == 0 {
        out.push(violation("d", "dimension must be >= 1".into()));
    }
    if !(spec.amplitude >= 0.0 && spec.amplitude.is_finite()) {
        out.push(violation("amplitude", format!("{} must be finite and >= 0", spec.amplitude)));
    }
    match &spec.space {
        SpaceKernel::Fractional { hurst } => {
            if hurst.len() != d {
                out.push(violation("hurst", format!("{} values given for d = {d}", hurst.len())));
            }
            for (i, h) in hurst.iter().enumerate() {
                if !(*h > 0.5 && *h < 1.0) {
                    out.push(violation("hurst", format!("H_{} = {h} not in (1/2, 1)", i + 1)));
                }
            }
        }
        SpaceKernel::Riesz { kappa, constant } | SpaceKernel::Bessel { kappa, constant } => {
            if !(*kappa > 0.0 && *kappa < d as f64) {
                out.push(violation("kappa", format!("kappa = {kappa} not in (0, {d})")));
            }
            if !(*constant > 0.0 && constant.is_finite()) {
                out.push(violation("constant", format!("{constant} must be > 0")));
            }
        }
    }
    match spec.time {
        TimeKernel::Constant { c } if !(c > 0.0 && c.is_finite()) => {
            out.push(violation("c", format!("{c} must be > 0")))
        }
        TimeKernel::RieszTime { beta } if !(beta > 0.0 && beta < 1.0) => {
            out.push(violation("beta", format!("{beta} not in (0, 1)")))
        }
        TimeKernel::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
            out.push(violation("rate", format!("{rate} must be > 0")))
        }
        _ => {}
    }
    out
}

/// ∫_0^∞ ω^{-κ/2-1} e^{-ω - b/ω} dω with b = |x|²/4, after ω = e^s,
/// split at ω = b.
pub(crate) fn bessel_integral(kappa: f64, r: f64) -> Result<f64> {
    let b = 0.25 * r * r;
    let f = |s: f64| (-0.5 * kappa * s - s.exp() - b * (-s).exp()).exp();
    // outside [ln(b/800), ln 800] one of the exponentials is below e^{-800}
    let lo = (b / 800.0).ln();
    let hi = 800f64.ln();
    let mut breaks = vec![lo];
    if b.ln() > lo && b.ln() < hi {
        breaks.push(b.ln());
    }
    breaks.push(hi);
    Ok(quad::integrate_with_breaks(f, &breaks, Tolerance::rel(1e-12))?.value)
}

/// Λ(v). Singular at v = 0 for every family.
pub fn space_cov(k: &SpaceKernel, v: &[f64]) -> Result<f64> {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    match k {
        SpaceKernel::Fractional { hurst } => {
            if hurst.len() != v.len() {
                return Err(Error::invalid("v", "length must match the number of Hurst indices"));
            }
            if v.contains(&0.0) {
                return Err(Error::SingularArgument(v.to_vec()));
            }
            Ok(hurst
                .iter()
                .zip(v)
                .map(|(h, x)| 2.0 * h * (2.0 * h - 1.0) * x.abs().powf(2.0 * h - 2.0))
                .product())
        }
        SpaceKernel::Riesz { kappa, constant } => {
            if r == 0.0 {
                return Err(Error::SingularArgument(v.to_vec()));
            }
            Ok(constant * r.powf(-kappa))
        }
        SpaceKernel::Bessel { kappa, constant } => {
            if r == 0.0 {
                return Err(Error::SingularArgument(v.to_vec()));
            }
            Ok(constant * bessel_integral(*kappa, r)?)
        }
    }
}

/// λ(dt); infinite at dt = 0 for the Riesz time kernel.
pub fn time_cov(k: &TimeKernel, dt: f64) -> f64 {
    match *k {
        TimeKernel::Constant { c } => c,
        TimeKernel::RieszTime { beta } => dt.abs().powf(-beta),
        TimeKernel::Exponential { rate } => (-rate * dt.abs()).exp(),
    }
}

/// C_t = 2 ∫_0^t λ(s) ds.
pub fn c_t(k: &TimeKernel, t: f64) -> f64 {
    match *k {
        TimeKernel::Constant { c } => 2.0 * c * t,
        TimeKernel::RieszTime { beta } => 2.0 * t.powf(1.0 - beta) / (1.0 - beta),
        TimeKernel::Exponential { rate } => -2.0 * (-rate * t).exp_m1() / rate,
    }
}
