//! Discrete Caputo derivative on a uniform grid starting at t = 0.

use super::{gamma, FractionalOrder, Regime};
use crate::error::{Error, Result};

/// Caputo derivative of order α of `samples` (values at t_k = k·dt).
///
/// Sub-diffusive orders use the L1 scheme on first differences; α > 1 uses
/// the analogous product rule on second differences. The value at t = 0 is
/// reported as 0.
pub fn caputo_derivative(samples: &[f64], alpha: FractionalOrder, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid("dt", format!("{dt} must be > 0")));
    }
    let m = alpha.ceil();
    if samples.len() < m + 1 {
        return Err(Error::GridTooShort {
            needed: m + 1,
            got: samples.len(),
        });
    }
    let a = alpha.alpha();
    let n = samples.len();
    let p = m as f64 - a;
    let weights: Vec<f64> = (0..n).map(|j| (j as f64 + 1.0).powf(p) - (j as f64).powf(p)).collect();
    let diffs: Vec<f64> = match alpha.regime() {
        Regime::Sub => samples.windows(2).map(|w| w[1] - w[0]).collect(),
        Regime::Super => (0..n - 1)
            .map(|k| {
                let c = k.max(1);
                samples[c + 1] - 2.0 * samples[c] + samples[c - 1]
            })
            .collect(),
    };
    let scale = dt.powf(-a) / gamma(1.0 + p);
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate().skip(1) {
        let s: f64 = (0..i).map(|k| weights[i - 1 - k] * diffs[k]).sum();
        *o = scale * s;
    }
    Ok(out)
}
