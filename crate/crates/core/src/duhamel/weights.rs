//! Exact space–time cell integrals of Y in d = 1.
//!
//! ∫_0^τ Y(σ, x) dσ = ½ τ^{α-ν} φ(-ν, α+1-ν; -|x|τ^{-ν}) and
//! ∫_0^z φ(-ν, β; -w) dw = 1/Γ(β+ν) - φ(-ν, β+ν; -z), so
//! G(τ, X) = ∫_0^τ ∫_0^X Y = ½ τ^α [1/Γ(α+1) - φ(-ν, α+1; -|X|τ^{-ν})] sgn X.

use rayon::prelude::*;

use crate::error::Result;
use crate::specfun::{recip_gamma, wright_phi, FractionalOrder, SeriesControl};

/// z beyond which φ(-ν, α+1; -z) Γ(α+1) < `rel`.
pub(crate) fn tail_cutoff(alpha: FractionalOrder, rel: f64) -> Result<f64> {
    let a = alpha.alpha();
    let nu = alpha.half();
    let limit = rel * recip_gamma(a + 1.0);
    let mut z = 1.0;
    while wright_phi(-nu, a + 1.0, z, SeriesControl::default())?.abs() > limit {
        z *= 1.25;
    }
    Ok(z)
}

/// G(τ, X) for X ≥ 0.
fn g(alpha: FractionalOrder, tau: f64, x: f64, cutoff: f64) -> Result<f64> {
    if tau <= 0.0 {
        return Ok(0.0);
    }
    let a = alpha.alpha();
    let nu = alpha.half();
    let z = x * tau.powf(-nu);
    let phi = if z > cutoff {
        0.0
    } else {
        wright_phi(-nu, a + 1.0, z, SeriesControl::default())?
    };
    Ok(0.5 * tau.powf(a) * (recip_gamma(a + 1.0) - phi))
}

/// W[q][r] = ∫_{(q-1)Δt}^{qΔt} ∫_{(r-½)h}^{(r+½)h} Y(τ, x) dx dτ, q ≥ 1, r ≥ 0.
#[derive(Debug, Clone)]
pub struct CellWeights {
    pub dt: f64,
    pub h: f64,
    steps: usize,
    width: usize,
    w: Vec<f64>,
}

impl CellWeights {
    pub fn new(alpha: FractionalOrder, dt: f64, h: f64, steps: usize, width: usize) -> Result<Self> {
        let cutoff = tail_cutoff(alpha, 1e-18)?;
        // cum[q][i] = G(qΔt, (i+½)h)
        let cum = (0..=steps)
            .into_par_iter()
            .map(|q| {
                (0..width)
                    .map(|i| g(alpha, q as f64 * dt, (i as f64 + 0.5) * h, cutoff))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let space = |q: usize, r: usize| {
            if r == 0 {
                2.0 * cum[q][0]
            } else {
                cum[q][r] - cum[q][r - 1]
            }
        };
        let mut w = Vec::with_capacity(steps * width);
        for q in 1..=steps {
            for r in 0..width {
                w.push(space(q, r) - space(q - 1, r));
            }
        }
        Ok(CellWeights {
            dt,
            h,
            steps,
            width,
            w,
        })
    }

    /// Weight for time lag q ≥ 1 and cell offset r (any sign).
    #[inline]
    pub fn get(&self, q: usize, r: isize) -> f64 {
        let r = r.unsigned_abs();
        if q == 0 || q > self.steps || r >= self.width {
            return 0.0;
        }
        self.w[(q - 1) * self.width + r]
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}
