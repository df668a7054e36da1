use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Kernel, KernelKind, RadialTable};
use crate::error::{Error, Result};
use crate::quad::{self, gauss_legendre, Tolerance};
use crate::specfun::{FractionalOrder, Regime};

/// Built-in bounded, smooth initial profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Zero,
    Constant {
        value: f64,
    },
    /// amplitude · exp(-|x - center|² / (2 width²))
    GaussianBump {
        amplitude: f64,
        width: f64,
        center: Vec<f64>,
    },
    /// amplitude · cos(k·x + phase)
    Sinusoid {
        amplitude: f64,
        wavevector: Vec<f64>,
        #[serde(default)]
        phase: f64,
    },
}

impl Profile {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Constant { value } => *value,
            Profile::GaussianBump {
                amplitude,
                width,
                center,
            } => {
                let r2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                amplitude * (-0.5 * r2 / (width * width)).exp()
            }
            Profile::Sinusoid {
                amplitude,
                wavevector,
                phase,
            } => {
                let kx: f64 = x.iter().zip(wavevector).map(|(a, b)| a * b).sum();
                amplitude * (kx + phase).cos()
            }
        }
    }

    fn validate(&self, d: usize) -> Result<()> {
        let ok = |v: f64| v.is_finite();
        match self {
            Profile::Zero => Ok(()),
            Profile::Constant { value } if ok(*value) => Ok(()),
            Profile::GaussianBump {
                amplitude,
                width,
                center,
            } if ok(*amplitude) && *width > 0.0 && center.len() == d => Ok(()),
            Profile::Sinusoid {
                amplitude,
                wavevector,
                phase,
            } if ok(*amplitude) && ok(*phase) && wavevector.len() == d => Ok(()),
            p => Err(Error::invalid("initial", format!("{p:?} is not a valid profile in dimension {d}"))),
        }
    }

    pub fn constant(&self) -> Option<f64> {
        match self {
            Profile::Zero => Some(0.0),
            Profile::Constant { value } => Some(*value),
            _ => None,
        }
    }
}

/// Initial conditions u₀ and, for α > 1, u₁ = ∂_t u(0, ·).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub u0: Profile,
    #[serde(default)]
    pub u1: Option<Profile>,
}

impl InitialData {
    pub fn new(u0: Profile, u1: Option<Profile>) -> Self {
        InitialData { u0, u1 }
    }

    pub fn constant(c: f64, alpha: FractionalOrder) -> Self {
        let u1 = (alpha.regime() == Regime::Super).then_some(Profile::Zero);
        InitialData {
            u0: Profile::Constant { value: c },
            u1,
        }
    }

    /// u₁ must be present exactly when α > 1.
    pub fn validate(&self, alpha: FractionalOrder, d: usize) -> Result<()> {
        match (alpha.regime(), &self.u1) {
            (Regime::Super, None) => return Err(Error::invalid("u1", "required when alpha > 1")),
            (Regime::Sub, Some(_)) => return Err(Error::invalid("u1", "only allowed when alpha > 1")),
            _ => {}
        }
        self.u0.validate(d)?;
        if let Some(u1) = &self.u1 {
            u1.validate(d)?;
        }
        Ok(())
    }

    pub fn terms(&self) -> Vec<(KernelKind, &Profile)> {
        let mut v = vec![(KernelKind::Z1, &self.u0)];
        if let Some(u1) = &self.u1 {
            v.push((KernelKind::Z2, u1));
        }
        v
    }

    /// True when every profile is spatially constant.
    pub fn is_constant(&self) -> bool {
        self.terms().iter().all(|(_, p)| p.constant().is_some())
    }
}

fn convolve(kernel: &Kernel, profile: &Profile, t: f64, x: &[f64]) -> Result<f64> {
    if let Some(c) = profile.constant() {
        return Ok(c * kernel.mass(t));
    }
    let d = kernel.dim();
    let (c, p) = kernel.decay();
    // beyond this radius the kernel is below 1e-14 of its scale
    let r_max = t.powf(kernel.alpha().half()) * (36.0 / c).powf(1.0 / p);
    let tol = Tolerance::rel(1e-10).with_abs(1e-14).with_max_intervals(4000);
    let mut failure = None;
    let mut note = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let value = match d {
        1 => {
            let f = |r: f64| note(kernel.radial(t, r)) * (profile.eval(&[x[0] + r]) + profile.eval(&[x[0] - r]));
            quad::integrate(f, 0.0, r_max, tol)?.value
        }
        2 => {
            let z_max = r_max * t.powf(-kernel.alpha().half());
            let table = RadialTable::build(*kernel, 1e-4 * z_max, z_max, 300)?;
            let n = 64;
            let f = |r: f64| {
                let mut shell = 0.0;
                for j in 0..n {
                    let th = 2.0 * PI * j as f64 / n as f64;
                    shell += profile.eval(&[x[0] + r * th.cos(), x[1] + r * th.sin()]);
                }
                note(table.radial(t, r)) * r * shell * 2.0 * PI / n as f64
            };
            quad::integrate(f, 0.0, r_max, tol)?.value
        }
        3 => {
            let (nodes, weights) = gauss_legendre(24);
            let m = 32;
            let f = |r: f64| {
                let mut shell = 0.0;
                for (cz, w) in nodes.iter().zip(&weights) {
                    let sz = (1.0 - cz * cz).sqrt();
                    for j in 0..m {
                        let ph = 2.0 * PI * j as f64 / m as f64;
                        let y = [x[0] + r * sz * ph.cos(), x[1] + r * sz * ph.sin(), x[2] + r * cz];
                        shell += w * profile.eval(&y);
                    }
                }
                note(kernel.radial(t, r)) * r * r * shell * 2.0 * PI / m as f64
            };
            quad::integrate(f, 0.0, r_max, tol)?.value
        }
        d => return Err(Error::Unsupported(format!("J0 with non-constant data in dimension {d}"))),
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// J₀(t, x) = Σ_k ∫ u_k(y) Z_{k+1}(t, x - y) dy.
pub fn j0(data: &InitialData, t: f64, x: &[f64], alpha: FractionalOrder, d: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid("t", format!("{t} must be > 0")));
    }
    if x.len() != d {
        return Err(Error::invalid("x", format!("expected {d} coordinates, got {}", x.len())));
    }
    data.validate(alpha, d)?;
    let mut total = 0.0;
    for (kind, profile) in data.terms() {
        total += convolve(&Kernel::new(kind, alpha, d)?, profile, t, x)?;
    }
    Ok(total)
}
