//! Special functions: reciprocal Gamma, the Wright function, the
//! Mittag-Leffler function and a discrete Caputo derivative.

mod caputo;
mod gamma;
mod mittag_leffler;
mod wright;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use caputo::caputo_derivative;
pub use gamma::{gamma, ln_gamma, ln_recip_gamma_signed, recip_gamma, sin_pi};
pub use mittag_leffler::mittag_leffler;
pub use wright::{wright_phi, wright_phi_contour, wright_phi_series, CANCELLATION_LIMIT};

/// Stopping rule for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 500,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be > 0"));
        }
        if max_terms < 1 {
            return Err(Error::invalid("max_terms", "must be >= 1"));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// α ∈ (1/2, 1)
    Sub,
    /// α ∈ (1, 2); a second initial condition is required.
    Super,
}

/// Time order α of the Caputo derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder {
    alpha: f64,
}

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.5 && alpha < 2.0) || alpha == 1.0 {
            return Err(Error::invalid(
                "alpha",
                format!("{alpha} not in (1/2, 1) ∪ (1, 2)"),
            ));
        }
        Ok(FractionalOrder { alpha })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// α/2, the space–time scaling exponent.
    pub fn half(self) -> f64 {
        0.5 * self.alpha
    }

    pub fn regime(self) -> Regime {
        if self.alpha < 1.0 {
            Regime::Sub
        } else {
            Regime::Super
        }
    }

    /// ⌈α⌉, the number of initial conditions.
    pub fn ceil(self) -> usize {
        match self.regime() {
            Regime::Sub => 1,
            Regime::Super => 2,
        }
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        FractionalOrder::new(a)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(a: FractionalOrder) -> f64 {
        a.alpha
    }
}
