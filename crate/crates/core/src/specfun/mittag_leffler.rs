//! Two-parameter Mittag-Leffler function E_{a,b}(z) = Σ z^n / Γ(a n + b).
//!
//! Positive arguments and small negative ones use the series. For negative
//! arguments with heavy cancellation (0 < a ≤ 2, a - b > -1) the function is
//! recovered as the inverse Laplace transform of s^{a-b}/(s^a - z) at t = 1,
//! integrated along a wedge contour s = ε + ρ e^{±iφ} plus the residues of
//! the poles s* = |z|^{1/a} e^{±iπ/a} that lie to the right of the wedge.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{ln_recip_gamma_signed, recip_gamma};
use super::wright::CANCELLATION_LIMIT;
use super::SeriesControl;
use crate::error::{Error, Result};
use crate::quad::{self, CompensatedSum, Tolerance};

struct Series {
    value: f64,
    max_term: f64,
    converged: bool,
}

fn series(a: f64, b: f64, z: f64, ctl: SeriesControl) -> Series {
    let mut sum = CompensatedSum::new();
    let mut max_term: f64 = 0.0;
    let ln_z = z.abs().ln();
    let mut small_run = 0;
    for n in 0..ctl.max_terms {
        let x = a * n as f64 + b;
        let term = match ln_recip_gamma_signed(x) {
            None => 0.0,
            Some((l, s)) => {
                let sign = if z < 0.0 && n % 2 == 1 { -s } else { s };
                let e = n as f64 * ln_z + l;
                if e > 709.0 {
                    return Series {
                        value: f64::NAN,
                        max_term: f64::INFINITY,
                        converged: false,
                    };
                }
                sign * e.exp()
            }
        };
        sum.add(term);
        max_term = max_term.max(term.abs());
        let s = sum.value();
        // terms decrease once a n + b exceeds |z|^{1/a} comfortably
        let past_peak = x > 1.0 && (x - b).max(1.0) > z.abs().powf(1.0 / a);
        if past_peak && term.abs() <= ctl.rel_tol * s.abs().max(f64::MIN_POSITIVE) {
            small_run += 1;
            if small_run >= 3 {
                return Series {
                    value: s,
                    max_term,
                    converged: true,
                };
            }
        } else {
            small_run = 0;
        }
    }
    Series {
        value: sum.value(),
        max_term,
        converged: false,
    }
}

fn contour(a: f64, b: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    debug_assert!(z < 0.0);
    let eps = 1.0;
    let zc = Complex64::new(z, 0.0);
    // poles of 1/(s^a - z) on the principal sheet (only for a > 1)
    let poles: Vec<Complex64> = if a > 1.0 {
        let r = (-z).powf(1.0 / a);
        vec![Complex64::from_polar(r, PI / a), Complex64::from_polar(r, -PI / a)]
    } else {
        Vec::new()
    };
    let pole_angle = poles.first().map(|p| (p - eps).arg());
    let phi = [0.6 * PI, 0.75 * PI, 0.9 * PI]
        .into_iter()
        .max_by(|x, y| {
            let dx = pole_angle.map_or(1.0, |p| (p - x).abs());
            let dy = pole_angle.map_or(1.0, |p| (p - y).abs());
            // prefer the steepest ray when no pole is nearby
            let sx = dx.min(0.1 * PI) - 1e-3 * x;
            let sy = dy.min(0.1 * PI) - 1e-3 * y;
            sx.total_cmp(&sy)
        })
        .unwrap_or(0.75 * PI);
    let dir = Complex64::from_polar(1.0, phi);
    let integrand = |rho: f64| {
        let s = eps + rho * dir;
        let v = s.exp() * s.powf(a - b) / (s.powf(a) - zc) * dir;
        v.im
    };
    let r_max = (60.0 + eps) / (-phi.cos());
    let mut breaks = vec![0.0];
    if let Some(p) = poles.first() {
        // closest approach of the ray to the pole
        let proj = ((p - eps) * dir.conj()).re;
        if proj > 0.0 && proj < r_max {
            breaks.push(proj);
        }
    }
    breaks.push(r_max);
    breaks.sort_by(f64::total_cmp);
    let tol = Tolerance::rel(ctl.rel_tol.max(1e-14))
        .with_abs(1e-16 * eps.exp())
        .with_max_intervals(4000);
    let est = quad::integrate_with_breaks(integrand, &breaks, tol).map_err(|e| match e {
        Error::QuadratureFailure { value, .. } => Error::NonConvergence {
            terms: ctl.max_terms,
            partial: value / PI,
        },
        other => other,
    })?;
    let mut total = est.value / PI;
    for p in &poles {
        if (p - eps).arg().abs() < phi {
            total += (p.exp() * p.powf(1.0 - b) / a).re;
        }
    }
    Ok(total)
}

fn exp_family(b: f64, z: f64, ctl: SeriesControl) -> Option<f64> {
    // E_{1,b} for integer b: z^{1-b} (e^z - Σ_{k<b-1} z^k/k!)
    if b == 1.0 {
        return Some(z.exp());
    }
    if b == 2.0 {
        return Some(if z == 0.0 { 1.0 } else { z.exp_m1() / z });
    }
    let _ = ctl;
    None
}

/// E_{a,b}(z) for a > 0 and real z.
pub fn mittag_leffler(a: f64, b: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid("a", format!("{a} must be > 0")));
    }
    if !z.is_finite() {
        return Err(Error::invalid("z", "must be finite"));
    }
    if z == 0.0 {
        return Ok(recip_gamma(b));
    }
    if a == 1.0 {
        if let Some(v) = exp_family(b, z, ctl) {
            return Ok(v);
        }
    }
    let s = series(a, b, z, ctl);
    let clean = s.converged && s.max_term <= CANCELLATION_LIMIT * s.value.abs();
    if clean {
        return Ok(s.value);
    }
    let contour_ok = z < 0.0 && a <= 2.0 && a - b > -1.0 && a != 1.0;
    if contour_ok {
        return contour(a, b, z, ctl);
    }
    if z < 0.0 && a <= 2.0 && a != 1.0 && a - b <= -1.0 {
        // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Γ(b-a)) / z
        let lower = mittag_leffler(a, b - a, z, ctl)?;
        return Ok((lower - recip_gamma(b - a)) / z);
    }
    if s.converged && s.max_term <= 1e8 * s.value.abs() {
        return Ok(s.value);
    }
    Err(Error::NonConvergence {
        terms: ctl.max_terms,
        partial: s.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_cases() {
        let c = SeriesControl::default();
        assert!((mittag_leffler(1.0, 1.0, 1.0, c).unwrap() - 1f64.exp()).abs() < 1e-14);
        assert!((mittag_leffler(2.0, 1.0, -1.0, c).unwrap() - 1f64.cos()).abs() < 1e-14);
        for &x in &[5.0, 20.0, 49.0] {
            let v = mittag_leffler(2.0, 1.0, -x, c).unwrap();
            assert!((v - x.sqrt().cos()).abs() < 1e-9, "x={x}: {v}");
        }
    }

    #[test]
    fn recursion_in_b_for_large_arguments() {
        // E_{a,a+1}(-x) = (1 - E_a(-x)) / x, E_{a,a+2}(-x) = (1 - E_{a,2}(-x)) / x
        let c = SeriesControl::default();
        for &a in &[0.75, 1.5] {
            for &x in &[30.0, 500.0, 1e5] {
                let e1 = mittag_leffler(a, 1.0, -x, c).unwrap();
                let v = mittag_leffler(a, a + 1.0, -x, c).unwrap();
                assert!((v - (1.0 - e1) / x).abs() < 1e-10 * v.abs(), "a={a} x={x} {v} {}", (1.0 - e1) / x);
                let e2 = mittag_leffler(a, 2.0, -x, c).unwrap();
                let w = mittag_leffler(a, a + 2.0, -x, c).unwrap();
                assert!((w - (1.0 - e2) / x).abs() < 1e-10 * w.abs(), "a={a} x={x} {w} {}", (1.0 - e2) / x);
            }
            // matches the series where both apply
            let x = 4.0;
            let s = series(a, a + 2.0, -x, c).value;
            let r = (mittag_leffler(a, 2.0, -x, c).unwrap() - 1.0) / -x;
            assert!((s - r).abs() < 1e-11);
        }
    }

    #[test]
    fn half_order_is_erfc_scaled() {
        // E_{1/2}(-x) = exp(x^2) erfc(x); check against the contour at large x
        // through the asymptotic 1/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4))
        let c = SeriesControl::default();
        let x: f64 = 40.0;
        let v = mittag_leffler(0.5, 1.0, -x, c).unwrap();
        let asym = 1.0 / (x * PI.sqrt()) * (1.0 - 1.0 / (2.0 * x * x) + 3.0 / (4.0 * x.powi(4)));
        assert!((v - asym).abs() < 1e-8 * asym);
    }

    #[test]
    fn contour_agrees_with_series_on_overlap() {
        let c = SeriesControl::default();
        for &(a, b) in &[(0.75, 1.0), (0.75, 0.75), (1.5, 1.0), (1.5, 1.5), (1.5, 2.0), (1.2, 1.0), (0.95, 1.0)] {
            for &x in &[0.5, 2.0, 4.0] {
                let s = series(a, b, -x, c);
                let k = contour(a, b, -x, c).unwrap();
                assert!((s.value - k).abs() < 1e-10 * s.value.abs().max(1e-6), "a={a} b={b} x={x}: {} vs {k}", s.value);
            }
        }
    }
}
