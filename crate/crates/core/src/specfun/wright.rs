//! Wright function φ(a, δ; -z) = Σ (-z)^n / (n! Γ(δ + a n)), a ∈ (-1, 0), z ≥ 0.
//!
//! Small arguments use the power series with compensated summation. Once the
//! series loses more than four digits to cancellation the value is computed
//! from the Hankel integral
//!
//!   φ(-ν, δ; -z) = (1/2πi) ∫_Ha exp(σ - z σ^ν) σ^{-δ} dσ,   ν = -a,
//!
//! taken along its steepest-descent path r(θ) = (z sin νθ / sin θ)^{1/(1-ν)},
//! on which the exponent is real. This keeps full relative accuracy in the
//! super-exponentially small tail.

use std::f64::consts::PI;

use super::gamma::recip_gamma;
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::quad::{self, CompensatedSum, Tolerance};

/// Largest tolerated ratio between the biggest series term and the sum
/// before the contour integral takes over.
pub const CANCELLATION_LIMIT: f64 = 1e4;

/// Series value, the largest term magnitude, and whether the stopping rule fired.
#[derive(Debug, Clone, Copy)]
pub struct SeriesOutcome {
    pub value: f64,
    pub max_term: f64,
    pub converged: bool,
}

fn check_args(a: f64, z: f64) -> Result<()> {
    if !(a > -1.0 && a < 0.0) {
        return Err(Error::invalid("a", format!("{a} not in (-1, 0)")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::invalid("z", format!("{z} must be finite and >= 0")));
    }
    Ok(())
}

/// Raw power series, without any fallback.
pub fn wright_phi_series(a: f64, delta: f64, z: f64, ctl: SeriesControl) -> Result<SeriesOutcome> {
    check_args(a, z)?;
    let nu = -a;
    // past this index the term magnitudes decrease monotonically
    let n_peak = (z * nu.powf(nu)).powf(1.0 / (1.0 - nu)).ceil() as usize + 1;
    let mut sum = CompensatedSum::new();
    let mut mag = 1.0; // z^n / n!
    let mut max_term: f64 = 0.0;
    let mut small_run = 0;
    for n in 0..ctl.max_terms {
        if n > 0 {
            mag *= z / n as f64;
        }
        let rg = recip_gamma(delta + a * n as f64);
        let term = if n % 2 == 0 { mag * rg } else { -mag * rg };
        if !term.is_finite() {
            break;
        }
        sum.add(term);
        max_term = max_term.max(term.abs());
        let s = sum.value();
        if n >= n_peak && term.abs() <= ctl.rel_tol * s.abs().max(f64::MIN_POSITIVE) {
            small_run += 1;
            if small_run >= 3 {
                return Ok(SeriesOutcome {
                    value: s,
                    max_term,
                    converged: true,
                });
            }
        } else {
            small_run = 0;
        }
        if mag == 0.0 {
            return Ok(SeriesOutcome {
                value: s,
                max_term,
                converged: true,
            });
        }
    }
    Ok(SeriesOutcome {
        value: sum.value(),
        max_term,
        converged: false,
    })
}

struct Path {
    nu: f64,
    z: f64,
}

impl Path {
    fn ln_r(&self, th: f64) -> f64 {
        ((self.z).ln() + (self.nu * th).sin().ln() - th.sin().ln()) / (1.0 - self.nu)
    }

    /// d(ln r)/dθ
    fn dln_r(&self, th: f64) -> f64 {
        let nu = self.nu;
        let v = if th < 1e-3 {
            th * (1.0 - nu * nu) / 3.0 + th.powi(3) * (1.0 - nu.powi(4)) / 45.0
        } else {
            nu / (nu * th).tan() - 1.0 / th.tan()
        };
        v / (1.0 - nu)
    }

    /// sin((1-ν)θ)/sin(νθ), with its θ → 0 limit.
    fn ratio(&self, th: f64) -> f64 {
        if th < 1e-8 {
            (1.0 - self.nu) / self.nu
        } else {
            ((1.0 - self.nu) * th).sin() / (self.nu * th).sin()
        }
    }

    /// Log-magnitude and oscillating factor of the integrand at θ.
    fn parts(&self, th: f64, delta: f64) -> (f64, f64) {
        let ln_r = self.ln_r(th);
        let r = ln_r.exp();
        let g = -r * self.ratio(th);
        let w = (1.0 - delta) * th;
        let osc = self.dln_r(th) * w.sin() + w.cos();
        (g + (1.0 - delta) * ln_r, osc)
    }
}

/// Steepest-descent contour evaluation; requires z > 0.
pub fn wright_phi_contour(a: f64, delta: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    check_args(a, z)?;
    if z == 0.0 {
        return Ok(recip_gamma(delta));
    }
    let nu = -a;
    let path = Path { nu, z };
    let sigma0 = (z * nu).powf(1.0 / (1.0 - nu));
    let peak = -sigma0 * (1.0 - nu) / nu + (1.0 - delta) * sigma0.ln();
    // truncate where the integrand has dropped by e^-60 relative to its peak
    let samples = 600;
    let mut th_max = PI;
    let mut last_big = 0.0;
    for k in 1..samples {
        let th = PI * k as f64 / samples as f64;
        let (lm, osc) = path.parts(th, delta);
        if lm + osc.abs().max(1.0).ln() > peak - 60.0 {
            last_big = th;
        }
    }
    if last_big < PI * (samples - 1) as f64 / samples as f64 {
        th_max = (last_big + PI / samples as f64).min(PI);
    }
    let f = |th: f64| {
        let (lm, osc) = path.parts(th, delta);
        if lm < -745.0 {
            0.0
        } else {
            lm.exp() * osc
        }
    };
    let scale = peak.exp();
    let tol = Tolerance::rel(ctl.rel_tol.max(1e-14))
        .with_abs(1e-16 * scale * th_max)
        .with_max_intervals(4000);
    // split the range so the peak at θ = 0 is resolved first
    let mut breaks = vec![0.0];
    let mut b = th_max;
    let mut mids = Vec::new();
    for _ in 0..6 {
        b *= 0.25;
        mids.push(b);
    }
    mids.reverse();
    breaks.extend(mids);
    breaks.push(th_max);
    let est = quad::integrate_with_breaks(f, &breaks, tol).map_err(|e| match e {
        Error::QuadratureFailure { value, .. } => Error::NonConvergence {
            terms: ctl.max_terms,
            partial: value / PI,
        },
        other => other,
    })?;
    Ok(est.value / PI)
}

/// The Wright function φ(a, δ; -z) for a ∈ (-1, 0) and z ≥ 0.
pub fn wright_phi(a: f64, delta: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    check_args(a, z)?;
    if z == 0.0 {
        return Ok(recip_gamma(delta));
    }
    if z < 700.0 {
        let s = wright_phi_series(a, delta, z, ctl)?;
        if s.converged && s.max_term <= CANCELLATION_LIMIT * s.value.abs() {
            return Ok(s.value);
        }
    }
    wright_phi_contour(a, delta, z, ctl)
}
