//! Desk-scale simulation of the mild solution in d = 1.
//!
//! Source terms are integrated against exact cell integrals of Y, so a
//! piecewise-constant forcing is propagated without quadrature error in time.

mod stochastic;
mod weights;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::chaos::{bound_terms, chaos_term_direct, compute_ell, ChaosQuadrature, ConvergenceInputs};
use crate::error::{Error, Result};
use crate::greens::{j0, InitialData};
use crate::noise::NoiseSpec;
use crate::specfun::{recip_gamma, FractionalOrder};

pub use stochastic::{mc_second_moment, pathwise_simulate, MomentField, PathwiseSolver};
pub use weights::CellWeights;

/// Config schema version accepted by [`SimulationConfig::validate`].
pub const SCHEMA_VERSION: u32 = 1;
/// Relative kernel mass allowed outside the source box.
pub const BOX_MASS_TOLERANCE: f64 = 1e-8;

/// Uniform steps t_m = m T / steps, m = 0..=steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
}

/// `cells` uniform cells on [lo, hi]; values live at cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceGrid {
    pub lo: f64,
    pub hi: f64,
    pub cells: usize,
}

impl SpaceGrid {
    pub fn h(&self) -> f64 {
        (self.hi - self.lo) / self.cells as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.cells).map(|j| self.lo + (j as f64 + 0.5) * h).collect()
    }
}

/// Deterministic source term f(t, x, u).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingSpec {
    Zero,
    Constant { value: f64 },
    /// f = coef · u
    Linear { coef: f64 },
}

impl ForcingSpec {
    pub fn eval(&self, _t: f64, _x: f64, u: f64) -> f64 {
        match *self {
            ForcingSpec::Zero => 0.0,
            ForcingSpec::Constant { value } => value,
            ForcingSpec::Linear { coef } => coef * u,
        }
    }
}

fn default_forcing() -> ForcingSpec {
    ForcingSpec::Zero
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub schema: u32,
    pub alpha: f64,
    pub d: usize,
    pub noise: NoiseSpec,
    pub initial: InitialData,
    pub t_grid: TimeGrid,
    pub x_grid: SpaceGrid,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub picard_iters: usize,
    #[serde(default = "two")]
    pub chaos_order: usize,
    #[serde(default = "default_forcing")]
    pub forcing: ForcingSpec,
}

impl SimulationConfig {
    pub fn order(&self) -> Result<FractionalOrder> {
        FractionalOrder::new(self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::invalid("schema", format!("{} (expected {SCHEMA_VERSION})", self.schema)));
        }
        let alpha = self.order()?;
        if self.d != 1 {
            return Err(Error::invalid("d", format!("{} (simulation runs in d = 1)", self.d)));
        }
        if self.noise.d != self.d {
            return Err(Error::invalid("noise.d", format!("{} differs from d = {}", self.noise.d, self.d)));
        }
        self.noise.check()?;
        self.initial.validate(alpha, self.d)?;
        if !(self.t_grid.t_max > 0.0 && self.t_grid.t_max.is_finite()) || self.t_grid.steps == 0 {
            return Err(Error::invalid("t_grid", "needs t_max > 0 and steps >= 1"));
        }
        if !(self.x_grid.hi > self.x_grid.lo) || self.x_grid.cells == 0 {
            return Err(Error::invalid("x_grid", "needs hi > lo and cells >= 1"));
        }
        if self.picard_iters == 0 {
            return Err(Error::invalid("picard_iters", "must be >= 1"));
        }
        if !(1..=2).contains(&self.chaos_order) {
            return Err(Error::invalid("chaos_order", format!("{} not in 1..=2", self.chaos_order)));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.t_grid.t_max / self.t_grid.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..=self.t_grid.steps).map(|m| m as f64 * dt).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Deterministic,
    /// Forward Riemann sum against the noise; not the Skorokhod solution.
    ForwardRiemannHeuristic,
}

/// Values on times × cell centres, row-major by time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub scheme: Scheme,
    pub seed: Option<u64>,
    /// Relative kernel mass outside the source box at the final time.
    pub box_mass_outside: f64,
}

impl GridField {
    pub fn get(&self, m: usize, j: usize) -> f64 {
        self.values[m * self.xs.len() + j]
    }

    pub fn last_row(&self) -> &[f64] {
        let n = self.xs.len();
        &self.values[self.values.len() - n..]
    }

    /// CSV `t,x,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,x,value")?;
        for (m, t) in self.times.iter().enumerate() {
            for (j, x) in self.xs.iter().enumerate() {
                writeln!(out, "{t:e},{x:e},{:e}", self.get(m, j))?;
            }
        }
        Ok(())
    }
}

/// J₀ on the grid; row 0 holds u₀.
pub(crate) fn j0_grid(config: &SimulationConfig, times: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    let alpha = config.order()?;
    let mut out = Vec::with_capacity(times.len() * xs.len());
    for &t in times {
        for &x in xs {
            out.push(if t == 0.0 {
                config.initial.u0.eval(&[x])
            } else {
                j0(&config.initial, t, &[x], alpha, 1)?
            });
        }
    }
    Ok(out)
}

/// Half-width L with kernel mass beyond |x| > L below `rel` of the total at t.
pub fn box_margin(alpha: FractionalOrder, t: f64, rel: f64) -> Result<f64> {
    Ok(weights::tail_cutoff(alpha, rel)? * t.powf(alpha.half()))
}

/// Relative mass of ∫_0^t Y(s, ·) ds outside [-half, half].
pub fn mass_outside(alpha: FractionalOrder, t: f64, half: f64) -> Result<f64> {
    let a = alpha.alpha();
    let nu = alpha.half();
    let phi = crate::specfun::wright_phi(-nu, a + 1.0, half * t.powf(-nu), Default::default())?;
    Ok((phi / recip_gamma(a + 1.0)).max(0.0))
}

/// u = J₀ + ∫_0^t ∫ f(s, y, u) Y(t-s, x-y) dy ds with f frozen on each
/// space–time cell. The source box extends the output box by the kernel
/// margin; the forcing on cell k uses ½(u_k + u_{k+1}) refined by
/// `picard_iters` fixed-point passes (one pass = explicit).
pub fn deterministic_solve(config: &SimulationConfig, forcing: &(dyn Fn(f64, f64, f64) -> f64 + Sync)) -> Result<GridField> {
    config.validate()?;
    let alpha = config.order()?;
    let steps = config.t_grid.steps;
    let dt = config.dt();
    let h = config.x_grid.h();
    let t_max = config.t_grid.t_max;
    let pad = (box_margin(alpha, t_max, BOX_MASS_TOLERANCE)? / h).ceil() as usize;
    let n_out = config.x_grid.cells;
    let n = n_out + 2 * pad;
    let xs: Vec<f64> = (0..n)
        .map(|j| config.x_grid.lo + (j as f64 - pad as f64 + 0.5) * h)
        .collect();
    let times = config.times();
    let w = CellWeights::new(alpha, dt, h, steps, n)?;
    let base = j0_grid(config, &times, &xs)?;
    let mut u = base.clone();
    let mut src: Vec<Vec<f64>> = Vec::with_capacity(steps);
    for m in 1..=steps {
        let prev: Vec<f64> = u[(m - 1) * n..m * n].to_vec();
        let mut guess = prev.clone();
        let s_mid = (m as f64 - 0.5) * dt;
        let mut row = vec![0.0; n];
        for _ in 0..config.picard_iters {
            let f_last: Vec<f64> = (0..n)
                .map(|j| forcing(s_mid, xs[j], 0.5 * (prev[j] + guess[j])))
                .collect();
            for j in 0..n {
                let mut acc = base[m * n + j];
                for (k, fk) in src.iter().chain(std::iter::once(&f_last)).enumerate() {
                    let q = m - k;
                    for (jp, f) in fk.iter().enumerate() {
                        if *f != 0.0 {
                            acc += w.get(q, j as isize - jp as isize) * f;
                        }
                    }
                }
                row[j] = acc;
            }
            guess.copy_from_slice(&row);
            if src.len() == m {
                src.pop();
            }
            src.push(f_last);
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite() || v.abs() > 1e12) {
            return Err(Error::NumericalBlowup { step: m, value: *v });
        }
        u[m * n..(m + 1) * n].copy_from_slice(&row);
    }
    let values = (0..=steps)
        .flat_map(|m| u[m * n + pad..m * n + pad + n_out].to_vec())
        .collect();
    Ok(GridField {
        times,
        xs: xs[pad..pad + n_out].to_vec(),
        values,
        scheme: Scheme::Deterministic,
        seed: None,
        box_mass_outside: mass_outside(alpha, t_max, pad as f64 * h)?,
    })
}

/// E[u²(t, x)] ≈ J₀² + Σ_{n=1}^N n!‖fₙ‖² with the truncation indicator b_{N+1}/b_N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosMoment {
    pub value: f64,
    pub j0: f64,
    pub terms: [f64; 2],
    pub order: usize,
    pub truncation_ratio: f64,
}

pub fn second_moment_chaos(config: &SimulationConfig, t: f64, x: f64, quad: &ChaosQuadrature) -> Result<ChaosMoment> {
    config.validate()?;
    let alpha = config.order()?;
    let inputs = ConvergenceInputs::new(alpha, config.noise.clone(), t)?;
    let j = j0(&config.initial, t, &[x], alpha, 1)?;
    let mut terms = [0.0; 2];
    for n in 1..=config.chaos_order {
        terms[n - 1] = chaos_term_direct(n, &inputs, &config.initial, quad, t, &[x])?.value;
    }
    let ell = compute_ell(&inputs)?;
    let series = bound_terms(ell, 1.0, inputs.c_t, t, config.chaos_order + 1);
    Ok(ChaosMoment {
        value: j * j + terms.iter().sum::<f64>(),
        j0: j,
        terms,
        order: config.chaos_order,
        truncation_ratio: series.ratios[config.chaos_order],
    })
}
