use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::specfun::{ln_gamma, ln_recip_gamma_signed};

/// Largest simplex dimension evaluated by nested quadrature.
pub const MAX_SIMPLEX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexCheck {
    pub n: usize,
    pub h: f64,
    pub t: f64,
    pub numeric: f64,
    pub closed_form: f64,
}

impl SimplexCheck {
    pub fn rel_error(&self) -> f64 {
        ((self.numeric - self.closed_form) / self.closed_form).abs()
    }
}

/// Γ(1+h)ⁿ t^{n(1+h)} / Γ(n(1+h)+1).
pub fn simplex_closed_form(n: usize, h: f64, t: f64) -> f64 {
    let m = n as f64 * (1.0 + h);
    let (lr, sign) = ln_recip_gamma_signed(m + 1.0).expect("n(1+h)+1 > 0");
    sign * (n as f64 * ln_gamma(1.0 + h) + m * t.ln() + lr).exp()
}

/// ∫_0^s (s-u)^h g(u) du. For h < 0 the weight is removed by
/// u = s - v^{1/(1+h)}; for h ≥ 0, u = s - v² leaves 2v^{2h+1}.
fn weighted(s: f64, h: f64, failure: &Cell<Option<Error>>, g: &dyn Fn(f64) -> f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let tol = Tolerance::rel(1e-10).with_abs(1e-300).with_max_intervals(2000);
    let est = if h < 0.0 {
        let q = 1.0 / (1.0 + h);
        quad::integrate(|v| g((s - v.powf(q)).max(0.0)), 0.0, s.powf(1.0 + h), tol).map(|e| q * e.value)
    } else {
        quad::integrate(|v| 2.0 * v.powf(2.0 * h + 1.0) * g((s - v * v).max(0.0)), 0.0, s.sqrt(), tol).map(|e| e.value)
    };
    est.unwrap_or_else(|e| {
        failure.set(Some(e));
        f64::NAN
    })
}

/// A_k(s) over 0 < s₁ < … < s_{k-1} < s with weights (s_{j+1} - s_j)^h; A_1 = 1.
fn level(k: usize, s: f64, h: f64, failure: &Cell<Option<Error>>) -> f64 {
    if k == 1 {
        return 1.0;
    }
    weighted(s, h, failure, &|u| level(k - 1, u, h, failure))
}

/// Iterated quadrature of ∫_{0<s₁<…<sₙ<t} [(t-sₙ)(sₙ-sₙ₋₁)…(s₂-s₁)]^h ds next
/// to its closed form. Refuses h ≤ -1, where the integral diverges.
pub fn dirichlet_simplex(n: usize, h: f64, t: f64) -> Result<SimplexCheck> {
    if !(h > -1.0) {
        return Err(Error::DivergenceDetected(format!("simplex integral with h = {h} needs 1 + h > 0")));
    }
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    if n > MAX_SIMPLEX_DIM {
        return Err(Error::Unsupported(format!("simplex dimension {n} > {MAX_SIMPLEX_DIM}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("{t} must be > 0")));
    }
    let failure = Cell::new(None);
    let numeric = level(n + 1, t, h, &failure);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(SimplexCheck {
        n,
        h,
        t,
        numeric,
        closed_form: simplex_closed_form(n, h, t),
    })
}

/// n ∈ {1,2,3} × h ∈ {-0.5,-0.3,0,0.5,1} × t ∈ {0.5,1,2}.
pub fn dirichlet_grid() -> Vec<(usize, f64, f64)> {
    let mut out = Vec::with_capacity(45);
    for n in 1..=3 {
        for &h in &[-0.5, -0.3, 0.0, 0.5, 1.0] {
            for &t in &[0.5, 1.0, 2.0] {
                out.push((n, h, t));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    #[test]
    fn two_simplex_volume() {
        let c = dirichlet_simplex(2, 0.0, 1.0).unwrap();
        assert!((c.numeric - 0.5).abs() < 1e-12);
        assert!((c.closed_form - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gamma_ratios() {
        let c = dirichlet_simplex(2, -0.3, 1.0).unwrap();
        let exact = gamma(0.7).powi(2) / gamma(2.4);
        assert!((c.closed_form - exact).abs() < 1e-13 * exact);
        assert!(c.rel_error() < 1e-6);
        let c = dirichlet_simplex(3, 0.5, 2.0).unwrap();
        let exact = gamma(1.5).powi(3) / gamma(5.5) * 2f64.powf(4.5);
        assert!((c.closed_form - exact).abs() < 1e-12 * exact);
        assert!(c.rel_error() < 1e-5);
    }

    #[test]
    fn full_grid_and_edges() {
        let grid = dirichlet_grid();
        assert_eq!(grid.len(), 45);
        for (n, h, t) in grid {
            let c = dirichlet_simplex(n, h, t).unwrap();
            assert!(c.rel_error() < 1e-5, "{c:?}");
        }
        let edge = dirichlet_simplex(3, -1.0 + 1e-3, 1.0).unwrap();
        assert!(edge.rel_error() < 1e-5, "{edge:?}");
        assert!(matches!(dirichlet_simplex(2, -1.0, 1.0), Err(Error::DivergenceDetected(_))));
        assert!(matches!(dirichlet_simplex(2, -1.5, 1.0), Err(Error::DivergenceDetected(_))));
        let four = dirichlet_simplex(4, 1.0, 1.0).unwrap();
        assert!(four.rel_error() < 1e-5);
    }
}
