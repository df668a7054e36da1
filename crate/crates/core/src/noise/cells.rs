//! Covariances of noise increments over cells: ∫_I∫_J λ(s-r) ds dr and
//! ∫_A∫_B Λ(y-z) dy dz.
//!
//! In one variable both reduce to the even second antiderivative
//! G(u) = ∫_0^{|u|} (|u| - v) k(v) dv of the kernel:
//! ∫_a^b∫_c^d k(s-r) dr ds = G(b-c) + G(a-d) - G(a-c) - G(b-d).

use super::{bessel_integral, space_cov, SpaceKernel, TimeKernel};
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};

fn combine(g: impl Fn(f64) -> Result<f64>, a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    Ok(g(a.1 - b.0)? + g(a.0 - b.1)? - g(a.0 - b.0)? - g(a.1 - b.1)?)
}

fn g_time(k: &TimeKernel, u: f64) -> f64 {
    let u = u.abs();
    match *k {
        TimeKernel::Constant { c } => 0.5 * c * u * u,
        TimeKernel::RieszTime { beta } => u.powf(2.0 - beta) / ((1.0 - beta) * (2.0 - beta)),
        TimeKernel::Exponential { rate } => {
            let x = rate * u;
            if x < 1e-3 {
                u * u * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0)
            } else {
                u / rate + (-x).exp_m1() / (rate * rate)
            }
        }
    }
}

/// ∫_{a.0}^{a.1} ∫_{b.0}^{b.1} λ(s - r) dr ds.
pub fn time_cell_cov(k: &TimeKernel, a: (f64, f64), b: (f64, f64)) -> f64 {
    g_time(k, a.1 - b.0) + g_time(k, a.0 - b.1) - g_time(k, a.0 - b.0) - g_time(k, a.1 - b.1)
}

/// G for a one-dimensional spatial kernel.
fn g_space_1d(k: &SpaceKernel, axis: usize, u: f64) -> Result<f64> {
    let u = u.abs();
    if u == 0.0 {
        return Ok(0.0);
    }
    match k {
        SpaceKernel::Fractional { hurst } => Ok(u.powf(2.0 * hurst[axis])),
        SpaceKernel::Riesz { kappa, constant } => Ok(constant * u.powf(2.0 - kappa) / ((1.0 - kappa) * (2.0 - kappa))),
        SpaceKernel::Bessel { kappa, constant } => {
            // v = u w^{1/(1-κ)} absorbs the v^{-κ} singularity of Λ at the origin
            let e = 1.0 / (1.0 - kappa);
            let mut failure = None;
            let f = |w: f64| {
                if w == 0.0 {
                    return 0.0;
                }
                let v = u * w.powf(e);
                let jac = u * e * w.powf(e - 1.0);
                match bessel_integral(*kappa, v) {
                    Ok(l) => (u - v) * l * jac,
                    Err(err) => {
                        failure.get_or_insert(err);
                        0.0
                    }
                }
            };
            let est = quad::integrate(f, 0.0, 1.0, Tolerance::rel(1e-11))?;
            match failure {
                Some(e) => Err(e),
                None => Ok(constant * est.value),
            }
        }
    }
}

/// |[a.0, a.1] ∩ [b.0 + w, b.1 + w]|
fn overlap(a: (f64, f64), b: (f64, f64), w: f64) -> f64 {
    (a.1.min(b.1 + w) - a.0.max(b.0 + w)).max(0.0)
}

fn nested(k: &SpaceKernel, a: &[(f64, f64)], b: &[(f64, f64)], w: &[f64], tol: f64) -> Result<f64> {
    let i = w.len();
    if i == a.len() {
        return space_cov(k, w);
    }
    let (lo, hi) = (a[i].0 - b[i].1, a[i].1 - b[i].0);
    let mut breaks = vec![lo, a[i].0 - b[i].0, a[i].1 - b[i].1, 0.0, hi];
    breaks.retain(|x| *x >= lo && *x <= hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut failure = None;
    let f = |x: f64| {
        let weight = overlap(a[i], b[i], x);
        if weight == 0.0 {
            return 0.0;
        }
        let mut inner = w.to_vec();
        inner.push(x);
        match nested(k, a, b, &inner, tol * 0.1) {
            Ok(v) => weight * v,
            Err(Error::SingularArgument(_)) => 0.0,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let est = quad::integrate_with_breaks(f, &breaks, Tolerance::rel(tol).with_max_intervals(400))?;
    match failure {
        Some(e) => Err(e),
        None => Ok(est.value),
    }
}

/// ∫_A∫_B Λ(y - z) dy dz for boxes A, B given as per-axis intervals.
pub fn space_cell_cov(k: &SpaceKernel, a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::invalid("cells", "boxes must have the same positive dimension"));
    }
    match k {
        SpaceKernel::Fractional { hurst } => {
            if hurst.len() != a.len() {
                return Err(Error::invalid("cells", "dimension must match the number of Hurst indices"));
            }
            let mut prod = 1.0;
            for i in 0..hurst.len() {
                prod *= combine(|u| g_space_1d(k, i, u), a[i], b[i])?;
            }
            Ok(prod)
        }
        _ if a.len() == 1 => combine(|u| g_space_1d(k, 0, u), a[0], b[0]),
        _ => nested(k, a, b, &[], 1e-8),
    }
}
