use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

type MatrixField = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
type VectorField = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
type ScalarField = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Second-order operator B = Σ a_ij ∂_i∂_j + Σ b_i ∂_i + c.
///
/// Only the Laplacian has kernels in this crate; general coefficients are
/// carried for validation and configuration.
#[derive(Clone)]
pub struct EllipticOperatorSpec {
    pub d: usize,
    pub a: MatrixField,
    pub b: VectorField,
    pub c: ScalarField,
    pub a0: f64,
    pub holder_gamma: f64,
}

impl fmt::Debug for EllipticOperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EllipticOperatorSpec")
            .field("d", &self.d)
            .field("a0", &self.a0)
            .field("holder_gamma", &self.holder_gamma)
            .finish_non_exhaustive()
    }
}

impl EllipticOperatorSpec {
    pub fn laplacian(d: usize) -> Self {
        EllipticOperatorSpec {
            d,
            a: Arc::new(move |_| DMatrix::identity(d, d)),
            b: Arc::new(move |_| DVector::zeros(d)),
            c: Arc::new(|_| 0.0),
            a0: 1.0,
            holder_gamma: 1.0,
        }
    }

    /// Checks symmetry, ξᵀa(x)ξ ≥ a0|ξ|² and boundedness at `samples` random
    /// points of the box [-extent, extent]^d.
    pub fn validate(&self, samples: usize, extent: f64, seed: u64) -> Result<()> {
        if self.d == 0 {
            return Err(Error::invalid("d", "dimension must be >= 1"));
        }
        if !(self.a0 > 0.0) {
            return Err(Error::invalid("a0", "ellipticity constant must be > 0"));
        }
        if !(self.holder_gamma > 0.0 && self.holder_gamma <= 1.0) {
            return Err(Error::invalid("holder_gamma", "must be in (0, 1]"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x: Vec<f64> = (0..self.d).map(|_| rng.random_range(-extent..=extent)).collect();
            let a = (self.a)(&x);
            if a.nrows() != self.d || a.ncols() != self.d {
                return Err(Error::invalid("a", "matrix has the wrong shape"));
            }
            if (&a - a.transpose()).amax() > 1e-12 * a.amax().max(1.0) {
                return Err(Error::invalid("a", format!("not symmetric at {x:?}")));
            }
            // smallest eigenvalue bounds ξᵀaξ/|ξ|² from below
            let lo = a.clone().symmetric_eigen().eigenvalues.min();
            if lo < self.a0 * (1.0 - 1e-12) {
                return Err(Error::invalid(
                    "a",
                    format!("ellipticity {lo} below a0 = {} at {x:?}", self.a0),
                ));
            }
            let b = (self.b)(&x);
            let c = (self.c)(&x);
            if b.len() != self.d || !a.iter().chain(b.iter()).all(|v| v.is_finite()) || !c.is_finite() {
                return Err(Error::invalid("coefficients", format!("unbounded or malformed at {x:?}")));
            }
        }
        Ok(())
    }
}
