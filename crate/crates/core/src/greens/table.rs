use rayon::prelude::*;

use super::{c_d, Kernel};
use crate::error::Result;

/// Interpolation table of a kernel's radial profile on a logarithmic grid.
///
/// The stored quantity is f(z)·exp(c z^p), which has only algebraic growth,
/// so four-point interpolation in ln z keeps relative accuracy in the
/// super-exponential tail. Arguments outside the table are evaluated exactly.
#[derive(Debug, Clone)]
pub struct RadialTable {
    kernel: Kernel,
    ln_lo: f64,
    step: f64,
    scaled: Vec<f64>,
    z_lo: f64,
    z_hi: f64,
    c: f64,
    p: f64,
}

impl RadialTable {
    pub fn build(kernel: Kernel, z_lo: f64, z_hi: f64, nodes: usize) -> Result<Self> {
        let (c, p) = kernel.decay();
        let z_hi = z_hi.min((690.0 / c).powf(1.0 / p));
        let z_lo = z_lo.min(0.5 * z_hi);
        let nodes = nodes.max(8);
        let ln_lo = z_lo.ln();
        let step = (z_hi.ln() - ln_lo) / (nodes - 1) as f64;
        let scaled = (0..nodes)
            .into_par_iter()
            .map(|i| {
                let z = (ln_lo + step * i as f64).exp();
                Ok(kernel.profile(z)? * (c * z.powf(p)).exp())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(RadialTable {
            kernel,
            ln_lo,
            step,
            scaled,
            z_lo,
            z_hi,
            c,
            p,
        })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn profile(&self, z: f64) -> Result<f64> {
        if !(z >= self.z_lo && z <= self.z_hi) {
            return self.kernel.profile(z);
        }
        let s = (z.ln() - self.ln_lo) / self.step;
        let n = self.scaled.len();
        let i = (s.floor() as usize).clamp(1, n - 3) - 1;
        let u = s - i as f64;
        // Lagrange weights on nodes i, i+1, i+2, i+3 at offset u
        let w = [
            -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0,
            u * (u - 2.0) * (u - 3.0) / 2.0,
            -u * (u - 1.0) * (u - 3.0) / 2.0,
            u * (u - 1.0) * (u - 2.0) / 6.0,
        ];
        let h: f64 = (0..4).map(|k| w[k] * self.scaled[i + k]).sum();
        Ok(h * (-self.c * z.powf(self.p)).exp())
    }

    pub fn radial(&self, t: f64, r: f64) -> Result<f64> {
        let k = &self.kernel;
        let z = r.abs() * t.powf(-k.nu());
        Ok(c_d(k.dim()) * t.powf(k.time_exponent()) * self.profile(z)?)
    }
}
