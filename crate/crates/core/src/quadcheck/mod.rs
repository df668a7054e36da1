//! Numerical checks of the integral identities and scaling bounds the
//! existence argument rests on. Constants are absorbed by fitting log-log
//! slopes; only the exponents are asserted.

mod lemmas;
mod simplex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lemmas::{
    bessel_double_integral, bessel_double_integral_scaling, bessel_expected, frac_double_integral,
    frac_double_integral_scaling, frac_log_branch, intes_integral, intes_scaling, EnvelopeShape, LogBranchReport,
};
pub use simplex::{dirichlet_grid, dirichlet_simplex, simplex_closed_form, SimplexCheck, MAX_SIMPLEX_DIM};

/// Default slope tolerance.
pub const SLOPE_TOLERANCE: f64 = 0.05;

/// Composite Gauss–Legendre resolution: `panels` geometrically graded panels
/// of `order` nodes for every one-dimensional piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub panels: usize,
    pub order: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { panels: 40, order: 8 }
    }
}

impl Resolution {
    pub fn with_panels(panels: usize) -> Self {
        Resolution {
            panels,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub name: String,
    pub exponent_fit: f64,
    pub exponent_expected: f64,
    /// |exponent_fit - exponent_expected|
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Fitted log-intercept; reported, never asserted.
    pub intercept: f64,
    /// RMS of the log-log regression residuals.
    pub rms: f64,
    /// (scale, integral) pairs.
    pub points: Vec<(f64, f64)>,
}

/// Least-squares slope of ln value against ln scale.
pub fn fit_scaling(name: String, points: &[(f64, f64)], expected: f64) -> Result<ScalingReport> {
    if points.len() < 2 {
        return Err(Error::invalid("points", "need at least two"));
    }
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0 && y.is_finite())) {
        return Err(Error::QuadratureFailure {
            value: p.1,
            error: f64::NAN,
        });
    }
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("points", "scales must not all coincide"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    let residual = (slope - expected).abs();
    Ok(ScalingReport {
        name,
        exponent_fit: slope,
        exponent_expected: expected,
        residual,
        tolerance: SLOPE_TOLERANCE,
        pass: residual <= SLOPE_TOLERANCE,
        intercept,
        rms,
        points: points.to_vec(),
    })
}

fn diagonal(scales: &[f64]) -> Vec<(f64, f64)> {
    scales.iter().map(|&s| (s, s)).collect()
}

type Case = Box<dyn Fn(Resolution) -> Result<ScalingReport> + Send + Sync>;

/// Built-in cases, one closure per report.
pub fn default_cases() -> Vec<Case> {
    let s = [0.01, 0.03, 0.1, 0.3, 1.0];
    let small = [1e-5, 1e-4, 1e-3];
    let env = |zeta| EnvelopeShape {
        zeta,
        kappa_d: 0.0,
        sigma: 1.0,
    };
    vec![
        Box::new(move |res| intes_scaling(0.0, 1, 0.75, 1.0, &s, res)),
        Box::new(move |res| intes_scaling(-0.5, 1, 1.5, 1.0, &s, res)),
        Box::new(move |res| intes_scaling(-0.9, 2, 0.75, 1.0, &s, res)),
        Box::new(move |res| frac_double_integral_scaling(0.75, 0.0, 0.75, 1.0, &diagonal(&s), res)),
        Box::new(move |res| frac_double_integral_scaling(0.75, 0.0, 1.5, 1.0, &diagonal(&s), res)),
        Box::new(move |res| frac_double_integral_scaling(0.7, -0.3, 1.5, 1.0, &diagonal(&s), res)),
        Box::new(move |res| bessel_double_integral_scaling(0.5, 1, 1.5, env(-0.25), &diagonal(&small), res)),
        Box::new(move |res| bessel_double_integral_scaling(0.5, 1, 0.75, env(-0.625), &diagonal(&small), res)),
        Box::new(move |res| bessel_double_integral_scaling(1.0, 2, 1.5, env(-1.0), &diagonal(&small), res)),
    ]
}

/// Runs every built-in case in parallel, in a fixed order.
pub fn default_suite(res: Resolution) -> Result<Vec<ScalingReport>> {
    default_cases().par_iter().map(|case| case(res)).collect()
}

/// Residual of one case at each resolution, coarse to fine.
pub fn refinement_residuals(case: &Case, panels: &[usize]) -> Result<Vec<f64>> {
    panels
        .iter()
        .map(|&p| case(Resolution::with_panels(p)).map(|r| r.residual))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_a_power_law() {
        let pts: Vec<(f64, f64)> = [0.1, 0.5, 2.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(0.7))).collect();
        let r = fit_scaling("p".into(), &pts, 0.7).unwrap();
        assert!(r.residual < 1e-12 && r.pass && r.rms < 1e-12);
        assert!((r.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit_scaling("p".into(), &pts[..1], 0.7).is_err());
    }

    #[test]
    fn suite_passes() {
        let reports = default_suite(Resolution::default()).unwrap();
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn refinement_tightens_residuals() {
        let cases = default_cases();
        let env = EnvelopeShape {
            zeta: -0.25,
            kappa_d: 0.0,
            sigma: 1.0,
        };
        let tiny = diagonal(&[1e-8, 1e-7, 1e-6]);
        let bessel: Case = Box::new(move |res| bessel_double_integral_scaling(0.5, 1, 1.5, env, &tiny, res));
        let cases = [cases.into_iter().nth(1).unwrap(), default_cases().into_iter().nth(5).unwrap(), bessel];
        for (i, case) in cases.iter().enumerate() {
            let r = refinement_residuals(case, &[6, 12, 24]).unwrap();
            println!("case {i}: {r:?}");
            assert!(r[0] >= r[1] && r[1] >= r[2], "case {i}: {r:?}");
        }
    }
}
