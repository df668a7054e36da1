//! The radial profile f_ν(z; μ, δ) = (2/Γ(μ/2)) ∫_1^∞ φ(-ν, δ; -zt)(t²-1)^{μ/2-1} dt
//! with f_ν(z; 0, δ) = φ(-ν, δ; -z).

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::specfun::{gamma, recip_gamma, wright_phi, FractionalOrder, SeriesControl};

/// Exponential decay constant c and power p of φ(-ν, δ; -z) ~ exp(-c z^p).
pub(crate) fn decay(nu: f64) -> (f64, f64) {
    let p = 1.0 / (1.0 - nu);
    ((1.0 - nu) * nu.powf(nu * p), p)
}

/// Radial profile for a real order μ ≥ 0.
pub fn f_radial(z: f64, mu: f64, delta: f64, alpha: FractionalOrder) -> Result<f64> {
    radial_profile(z, mu, delta, alpha.half(), SeriesControl::default())
}

pub(crate) fn radial_profile(z: f64, mu: f64, delta: f64, nu: f64, ctl: SeriesControl) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::invalid("z", format!("{z} must be finite and >= 0")));
    }
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::invalid("mu", format!("{mu} must be finite and >= 0")));
    }
    if mu == 0.0 {
        return wright_phi(-nu, delta, z, ctl);
    }
    if z == 0.0 {
        let r = recip_gamma(delta);
        if r == 0.0 {
            return Ok(0.0);
        }
        if mu >= 1.0 {
            // constant integrand against (t²-1)^{μ/2-1}: not integrable at infinity
            return Err(Error::QuadratureFailure {
                value: f64::INFINITY,
                error: f64::INFINITY,
            });
        }
        return Ok(gamma(0.5 * (1.0 - mu)) * r / std::f64::consts::PI.sqrt());
    }

    // t = cosh u turns the integral into ∫_0^∞ φ(-ν, δ; -z cosh u) sinh^{μ-1}u du
    let (c, p) = decay(nu);
    let w_max = ((c * z.powf(p) + 45.0 + 5.0 * mu) / c).powf(1.0 / p);
    let u_max = (w_max / z).acosh();
    let u_knee = (1.0 / z).max(1.0).acosh().min(u_max);
    let mut failure = None;
    let mut phi = |u: f64| match wright_phi(-nu, delta, z * u.cosh(), ctl) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let tol = Tolerance::rel(1e-11).with_max_intervals(3000);
    let mut total = 0.0;
    let mut start = 0.0;
    if mu < 1.0 {
        // u = v^{1/μ} absorbs the u^{μ-1} endpoint singularity on [0, 1]
        let split = u_max.min(1.0);
        let head = quad::integrate(
            |v: f64| {
                let u = v.powf(1.0 / mu);
                let shape = if u == 0.0 { 1.0 } else { (u.sinh() / u).powf(mu - 1.0) };
                phi(u) * shape / mu
            },
            0.0,
            split.powf(mu),
            tol,
        )?;
        total += head.value;
        start = split;
    }
    if start < u_max {
        let mut breaks = vec![start];
        if u_knee > start && u_knee < u_max {
            breaks.push(u_knee);
        }
        breaks.push(u_max);
        let tail = quad::integrate_with_breaks(|u: f64| phi(u) * u.sinh().powf(mu - 1.0), &breaks, tol)?;
        total += tail.value;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * recip_gamma(0.5 * mu) * total)
}
