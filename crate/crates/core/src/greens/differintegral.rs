//! Z₁ and Z₂ recovered from Y by Riemann–Liouville differintegration in time:
//! Z₁ = I^{1-α} Y for α < 1, and for α > 1 Z₂ = I^{2-α} Y, Z₁ = I^{2-α} ∂_s Y.

use super::{c_d, norm, Kernel, KernelKind};
use crate::error::{Error, Result};
use crate::specfun::{recip_gamma, FractionalOrder, Regime};

const START: usize = 64;
const MAX_NODES: usize = 1 << 16;
const AGREEMENT: f64 = 1e-5;

/// Product-trapezoid Riemann–Liouville integral of order q of samples g_j on
/// s_j = j·t/n, evaluated at t.
fn product_trapezoid(g: &[f64], t: f64, q: f64) -> f64 {
    let n = g.len() - 1;
    let h = t / n as f64;
    let mut sum = 0.0;
    for j in 0..n {
        let a = t - (j + 1) as f64 * h;
        let b = t - j as f64 * h;
        let m0 = (b.powf(q) - a.powf(q)) / q;
        let m1 = (b.powf(q + 1.0) - a.powf(q + 1.0)) / (q + 1.0);
        sum += g[j] * (m1 - a * m0) + g[j + 1] * (b * m0 - m1);
    }
    sum / h * recip_gamma(q)
}

/// Z_k(t, x) by time differintegration of Y, refined by doubling until two
/// successive grids agree to 1e-5 relative. Requires x ≠ 0.
pub fn z_by_differintegral(kind: KernelKind, alpha: FractionalOrder, d: usize, t: f64, x: &[f64]) -> Result<f64> {
    if kind == KernelKind::Y {
        return Err(Error::invalid("kernel", "differintegral route produces Z1 or Z2"));
    }
    if !(t > 0.0) {
        return Err(Error::invalid("t", format!("{t} must be > 0")));
    }
    // validates Z2 against the regime
    Kernel::new(kind, alpha, d)?;
    let y = Kernel::new(KernelKind::Y, alpha, d)?;
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::EvaluationAtSingularity("differintegral route needs x != 0".into()));
    }
    let a = alpha.alpha();
    let nu = alpha.half();
    let (q, differentiate) = match (alpha.regime(), kind) {
        (Regime::Sub, _) => (1.0 - a, false),
        (Regime::Super, KernelKind::Z2) => (2.0 - a, false),
        (Regime::Super, _) => (2.0 - a, true),
    };
    let e = y.time_exponent();
    let cd = c_d(d);
    let sample = |s: f64| -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        let z = r * s.powf(-nu);
        if differentiate {
            let f = y.profile(z)?;
            let df = if f == 0.0 { 0.0 } else { y.profile_derivative(z)? };
            Ok(cd * s.powf(e - 1.0) * (e * f - nu * z * df))
        } else {
            Ok(cd * s.powf(e) * y.profile(z)?)
        }
    };

    let mut n = START;
    let mut g = (0..=n).map(|j| sample(t * j as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
    let mut prev = product_trapezoid(&g, t, q);
    while n < MAX_NODES {
        let m = 2 * n;
        let mut finer = Vec::with_capacity(m + 1);
        for (j, gj) in g.iter().enumerate() {
            finer.push(*gj);
            if j < n {
                finer.push(sample(t * (2 * j + 1) as f64 / m as f64)?);
            }
        }
        g = finer;
        n = m;
        let cur = product_trapezoid(&g, t, q);
        if (cur - prev).abs() <= AGREEMENT * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        terms: n,
        partial: prev,
    })
}
