//! Fundamental kernels Y, Z₁, Z₂ of ∂_t^α - Δ on ℝ^d, their envelope bounds,
//! and the initial-data term J₀.
//!
//! Every kernel has the self-similar form
//!
//!   K(t, x) = C_d t^{β-1-αd/2} f_{α/2}(|x| t^{-α/2}; d-1, β-αd/2),
//!
//! with β = α for Y, β = 1 for Z₁ and β = 2 for Z₂, i.e. K(t, ·) is the
//! inverse Fourier transform of t^{β-1} E_{α,β}(-|ξ|² t^α).

mod differintegral;
mod envelope;
mod initial;
mod operator;
mod radial;
mod table;

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{recip_gamma, wright_phi, FractionalOrder, Regime, SeriesControl};

pub use differintegral::z_by_differintegral;
pub use envelope::{
    envelope_bound, envelope_product, mu_y, mu_z, verify_envelope, DominationReport, EnvelopeParams, GridSpec,
    MuFactor,
};
pub use initial::{j0, InitialData, Profile};
pub use operator::EllipticOperatorSpec;
pub use radial::f_radial;
pub use table::RadialTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    /// Forcing kernel.
    Y,
    /// Propagator of u₀.
    Z1,
    /// Propagator of u₁ (α > 1 only).
    Z2,
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelKind::Y => "Y",
            KernelKind::Z1 => "Z1",
            KernelKind::Z2 => "Z2",
        })
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "y" => Ok(KernelKind::Y),
            "z1" => Ok(KernelKind::Z1),
            "z2" => Ok(KernelKind::Z2),
            _ => Err(Error::invalid("kernel", format!("`{s}` is not one of y, z1, z2"))),
        }
    }
}

/// C_d = 2^{-d} π^{(1-d)/2}.
pub fn c_d(d: usize) -> f64 {
    let d = d as f64;
    2f64.powf(-d) * PI.powf(0.5 * (1.0 - d))
}

/// p(t, x) = exp(-σ (|x| t^{-α/2})^{2/(2-α)}).
pub fn p_envelope(t: f64, x: &[f64], alpha: FractionalOrder, sigma: f64) -> f64 {
    p_radial(t, norm(x), alpha.alpha(), sigma)
}

pub(crate) fn p_radial(t: f64, r: f64, alpha: f64, sigma: f64) -> f64 {
    (-sigma * (r * t.powf(-0.5 * alpha)).powf(2.0 / (2.0 - alpha))).exp()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// One of the three kernels for a fixed order and dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    alpha: FractionalOrder,
    d: usize,
    ctl: SeriesControl,
}

impl Kernel {
    pub fn new(kind: KernelKind, alpha: FractionalOrder, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d", "dimension must be >= 1"));
        }
        if kind == KernelKind::Z2 && alpha.regime() == Regime::Sub {
            return Err(Error::invalid("kernel", "Z2 requires alpha in (1, 2)"));
        }
        Ok(Kernel {
            kind,
            alpha,
            d,
            ctl: SeriesControl::default(),
        })
    }

    pub fn with_control(mut self, ctl: SeriesControl) -> Self {
        self.ctl = ctl;
        self
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub(crate) fn nu(&self) -> f64 {
        self.alpha.half()
    }

    /// Index β of the Fourier multiplier t^{β-1} E_{α,β}(-|ξ|² t^α).
    pub fn beta(&self) -> f64 {
        match self.kind {
            KernelKind::Y => self.alpha.alpha(),
            KernelKind::Z1 => 1.0,
            KernelKind::Z2 => 2.0,
        }
    }

    /// Second Wright parameter δ = β - αd/2 of the radial profile.
    pub fn delta(&self) -> f64 {
        self.beta() - self.nu() * self.d as f64
    }

    /// K(st, (st)^{α/2} y) = s^e K(t, t^{α/2} y) with e returned here.
    pub fn time_exponent(&self) -> f64 {
        self.beta() - 1.0 - self.nu() * self.d as f64
    }

    /// ∫ K(t, x) dx = t^{β-1}/Γ(β).
    pub fn mass(&self, t: f64) -> f64 {
        t.powf(self.beta() - 1.0) * recip_gamma(self.beta())
    }

    /// Decay constant c and power p with f(z) ≈ exp(-c z^p) for large z.
    pub fn decay(&self) -> (f64, f64) {
        radial::decay(self.nu())
    }

    /// Radial profile f(z) = f_{α/2}(z; d-1, δ).
    pub fn profile(&self, z: f64) -> Result<f64> {
        let nu = self.nu();
        let delta = self.delta();
        if z == 0.0 && self.d >= 2 {
            return Err(Error::EvaluationAtSingularity(format!(
                "{} at x = 0 in dimension {}",
                self.kind, self.d
            )));
        }
        match self.d {
            1 => wright_phi(-nu, delta, z, self.ctl),
            // ∫_z^∞ φ(-ν, δ; -w) dw = φ(-ν, δ+ν; -z)
            3 => Ok(2.0 * wright_phi(-nu, delta + nu, z, self.ctl)? / z),
            d => radial::radial_profile(z, (d - 1) as f64, delta, nu, self.ctl),
        }
    }

    /// f'(z), available in closed form for d = 1 and d = 3.
    pub fn profile_derivative(&self, z: f64) -> Result<f64> {
        let nu = self.nu();
        let delta = self.delta();
        match self.d {
            1 => Ok(-wright_phi(-nu, delta - nu, z, self.ctl)?),
            3 if z > 0.0 => {
                let a = wright_phi(-nu, delta, z, self.ctl)?;
                let b = wright_phi(-nu, delta + nu, z, self.ctl)?;
                Ok(-2.0 * a / z - 2.0 * b / (z * z))
            }
            3 => Err(Error::EvaluationAtSingularity("profile derivative at z = 0".into())),
            d => Err(Error::Unsupported(format!("closed-form profile derivative in dimension {d}"))),
        }
    }

    /// K(t, x) for |x| = r.
    pub fn radial(&self, t: f64, r: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::invalid("t", format!("{t} must be > 0")));
        }
        let z = r.abs() * t.powf(-self.nu());
        Ok(c_d(self.d) * t.powf(self.time_exponent()) * self.profile(z)?)
    }

    pub fn eval(&self, t: f64, x: &[f64]) -> Result<f64> {
        if x.len() != self.d {
            return Err(Error::invalid("x", format!("expected {} coordinates, got {}", self.d, x.len())));
        }
        self.radial(t, norm(x))
    }
}

/// Y(t, x) for B = Δ.
pub fn green_y(t: f64, x: &[f64], alpha: FractionalOrder, d: usize) -> Result<f64> {
    Kernel::new(KernelKind::Y, alpha, d)?.eval(t, x)
}

/// Z_k(t, x) for k ∈ {1, 2}.
pub fn green_z(k: u8, t: f64, x: &[f64], alpha: FractionalOrder, d: usize) -> Result<f64> {
    let kind = match k {
        1 => KernelKind::Z1,
        2 => KernelKind::Z2,
        _ => return Err(Error::invalid("k", format!("{k} must be 1 or 2"))),
    };
    Kernel::new(kind, alpha, d)?.eval(t, x)
}

/// CSV tabulation with header `t,x1,..,xd,value`, one row per (t, x) pair.
pub fn write_kernel_csv<W: Write>(kernel: &Kernel, times: &[f64], points: &[Vec<f64>], mut out: W) -> Result<()> {
    let mut header = String::from("t");
    for i in 1..=kernel.dim() {
        header.push_str(&format!(",x{i}"));
    }
    writeln!(out, "{header},value")?;
    for &t in times {
        for x in points {
            let v = kernel.eval(t, x)?;
            let coords: Vec<String> = x.iter().map(|c| format!("{c:e}")).collect();
            writeln!(out, "{t:e},{},{v:e}", coords.join(","))?;
        }
    }
    Ok(())
}
