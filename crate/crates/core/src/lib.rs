//! Green's kernels, noise covariances and moment bounds for the
//! time-fractional stochastic heat equation with multiplicative noise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chaos;
pub mod duhamel;
pub mod error;
pub mod quad;
pub mod quadcheck;
pub mod greens;
pub mod noise;
pub mod specfun;

pub use error::{Error, Result};
pub use specfun::{FractionalOrder, Regime, SeriesControl};
