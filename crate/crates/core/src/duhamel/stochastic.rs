//! Forward Riemann scheme for u = J₀ + ∫∫ Y(t-s, x-y) u(s, y) W(ds, dy).
//!
//! The integrand is frozen at the left end of each time cell and the kernel is
//! replaced by its cell average. This is a pathwise (forward) integral, not the
//! Skorokhod integral, so moments are only approximate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{j0_grid, mass_outside, CellWeights, GridField, Scheme, SimulationConfig};
use crate::error::{Error, Result};
use crate::noise::{FieldSampler, NoiseGrid, UniformGrid};

const BLOWUP: f64 = 1e12;
const CHUNK: usize = 64;

/// Sampler, weights and J₀ for one config, reusable across draws.
pub struct PathwiseSolver {
    config: SimulationConfig,
    sampler: FieldSampler,
    times: Vec<f64>,
    xs: Vec<f64>,
    base: Vec<f64>,
    /// kernel[q - 1][r] = W_{q,r} / (Δt h)
    kernel: Vec<Vec<f64>>,
    box_mass_outside: f64,
}

impl PathwiseSolver {
    pub fn new(config: &SimulationConfig) -> Result<Self> {
        config.validate()?;
        let alpha = config.order()?;
        let steps = config.t_grid.steps;
        let cells = config.x_grid.cells;
        let dt = config.dt();
        let h = config.x_grid.h();
        let grid = NoiseGrid {
            time: UniformGrid::new(0.0, dt, steps)?,
            space: vec![UniformGrid::new(config.x_grid.lo, h, cells)?],
        };
        let sampler = FieldSampler::new(&config.noise, &grid)?;
        let times = config.times();
        let xs = config.x_grid.centers();
        let base = j0_grid(config, &times, &xs)?;
        let w = CellWeights::new(alpha, dt, h, steps, cells)?;
        let scale = 1.0 / (dt * h);
        let kernel = (1..=steps)
            .map(|q| (0..cells).map(|r| w.get(q, r as isize) * scale).collect())
            .collect();
        let half = 0.5 * (config.x_grid.hi - config.x_grid.lo);
        Ok(PathwiseSolver {
            config: config.clone(),
            sampler,
            times,
            xs,
            base,
            kernel,
            box_mass_outside: mass_outside(alpha, config.t_grid.t_max, half)?,
        })
    }

    /// Trajectory for draw `draw` of the config seed, row-major by time.
    pub fn values(&self, draw: u64) -> Result<Vec<f64>> {
        let noise = self.sampler.sample(self.config.seed, draw);
        let n = self.xs.len();
        let steps = self.config.t_grid.steps;
        let mut u = self.base.clone();
        // v[k][j] = u(t_k, x_j) ΔW_{k,j}
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(steps);
        for m in 1..=steps {
            let k = m - 1;
            v.push((0..n).map(|j| u[k * n + j] * noise.get(k, j)).collect());
            let row = &mut u[m * n..(m + 1) * n];
            for (k, vk) in v.iter().enumerate() {
                let wq = &self.kernel[m - k - 1];
                for (j, out) in row.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (jp, x) in vk.iter().enumerate() {
                        acc += wq[j.abs_diff(jp)] * x;
                    }
                    *out += acc;
                }
            }
            if let Some(bad) = row.iter().find(|x| !x.is_finite() || x.abs() > BLOWUP) {
                return Err(Error::NumericalBlowup { step: m, value: *bad });
            }
        }
        Ok(u)
    }

    pub fn simulate(&self, draw: u64) -> Result<GridField> {
        Ok(GridField {
            times: self.times.clone(),
            xs: self.xs.clone(),
            values: self.values(draw)?,
            scheme: Scheme::ForwardRiemannHeuristic,
            seed: Some(self.config.seed),
            box_mass_outside: self.box_mass_outside,
        })
    }
}

/// First trajectory (draw 0) for the config seed.
pub fn pathwise_simulate(config: &SimulationConfig) -> Result<GridField> {
    PathwiseSolver::new(config)?.simulate(0)
}

/// Sample mean and second moment with 95% normal-approximation half-widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentField {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub samples: usize,
    pub mean: Vec<f64>,
    pub mean_ci: Vec<f64>,
    pub second: Vec<f64>,
    pub second_ci: Vec<f64>,
}

impl MomentField {
    fn index(&self, m: usize, j: usize) -> usize {
        m * self.xs.len() + j
    }

    pub fn mean_at(&self, m: usize, j: usize) -> (f64, f64) {
        let i = self.index(m, j);
        (self.mean[i], self.mean_ci[i])
    }

    pub fn second_at(&self, m: usize, j: usize) -> (f64, f64) {
        let i = self.index(m, j);
        (self.second[i], self.second_ci[i])
    }
}

#[derive(Clone)]
struct Sums {
    s1: Vec<f64>,
    s2: Vec<f64>,
    s4: Vec<f64>,
}

impl Sums {
    fn zeros(n: usize) -> Self {
        Sums {
            s1: vec![0.0; n],
            s2: vec![0.0; n],
            s4: vec![0.0; n],
        }
    }

    fn add(&mut self, u: &[f64]) {
        for (i, x) in u.iter().enumerate() {
            let x2 = x * x;
            self.s1[i] += x;
            self.s2[i] += x2;
            self.s4[i] += x2 * x2;
        }
    }

    fn merge(&mut self, o: &Sums) {
        for i in 0..self.s1.len() {
            self.s1[i] += o.s1[i];
            self.s2[i] += o.s2[i];
            self.s4[i] += o.s4[i];
        }
    }
}

/// Averages over draws 0..samples. Draws are reduced in fixed chunks in
/// order, so the result does not depend on the thread count.
pub fn mc_second_moment(config: &SimulationConfig, samples: usize) -> Result<MomentField> {
    if samples < 2 {
        return Err(Error::invalid("samples", format!("{samples} (need at least 2)")));
    }
    let solver = PathwiseSolver::new(config)?;
    let size = solver.base.len();
    let chunks = samples.div_ceil(CHUNK);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s = Sums::zeros(size);
            for draw in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                s.add(&solver.values(draw as u64)?);
            }
            Ok(s)
        })
        .collect::<Result<Vec<Sums>>>()?;
    let mut total = Sums::zeros(size);
    for p in &partial {
        total.merge(p);
    }
    let n = samples as f64;
    let half = |mean: f64, mean_sq: f64| {
        let var = (mean_sq - mean * mean).max(0.0) * n / (n - 1.0);
        1.96 * (var / n).sqrt()
    };
    let mean: Vec<f64> = total.s1.iter().map(|s| s / n).collect();
    let second: Vec<f64> = total.s2.iter().map(|s| s / n).collect();
    let fourth: Vec<f64> = total.s4.iter().map(|s| s / n).collect();
    Ok(MomentField {
        mean_ci: (0..size).map(|i| half(mean[i], second[i])).collect(),
        second_ci: (0..size).map(|i| half(second[i], fourth[i])).collect(),
        times: solver.times,
        xs: solver.xs,
        samples,
        mean,
        second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duhamel::tests::config;
    use crate::duhamel::{deterministic_solve, second_moment_chaos};
    use crate::chaos::ChaosQuadrature;
    use crate::greens::{InitialData, Profile};

    #[test]
    fn zero_amplitude_is_the_deterministic_solution() {
        let mut c = config(0.75, 0.25, 4, 2.0, 21);
        c.noise.amplitude = 0.0;
        c.initial = InitialData::new(
            Profile::GaussianBump {
                amplitude: 1.0,
                width: 0.5,
                center: vec![0.0],
            },
            None,
        );
        let p = pathwise_simulate(&c).unwrap();
        let d = deterministic_solve(&c, &|_, _, _| 0.0).unwrap();
        assert_eq!(p.values, d.values);
        assert_eq!(p.scheme, Scheme::ForwardRiemannHeuristic);
    }

    #[test]
    fn reproducible_and_draw_dependent() {
        let c = config(1.5, 0.25, 6, 1.0, 11);
        let s = PathwiseSolver::new(&c).unwrap();
        let a = s.values(3).unwrap();
        assert_eq!(a, s.values(3).unwrap());
        assert_ne!(a, s.values(4).unwrap());
        assert_eq!(pathwise_simulate(&c).unwrap().values, s.values(0).unwrap());
    }

    #[test]
    fn moments_do_not_depend_on_threads() {
        let c = config(0.75, 0.25, 4, 1.0, 9);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| mc_second_moment(&c, 150).unwrap());
        let b = mc_second_moment(&c, 150).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn blowup_is_reported() {
        let mut c = config(0.75, 0.25, 4, 1.0, 9);
        c.noise.amplitude = 1e9;
        assert!(matches!(pathwise_simulate(&c), Err(Error::NumericalBlowup { .. })));
    }

    #[test]
    fn white_in_time_mean_stays_at_j0() {
        // near-white time kernel: increments in later cells are almost
        // independent of the past, so the forward sum is centred
        let mut c = config(0.75, 0.25, 8, 4.0, 41);
        c.noise.time = crate::noise::TimeKernel::Exponential { rate: 400.0 };
        let m = mc_second_moment(&c, 2000).unwrap();
        let (mean, ci) = m.mean_at(8, 20);
        assert!((mean - 1.0).abs() <= ci.max(1e-3), "{mean} ± {ci}");
    }

    #[test]
    fn second_moment_is_above_j0_squared_and_near_chaos() {
        let c = config(1.5, 0.25, 12, 1.5, 31);
        let m = mc_second_moment(&c, 1000).unwrap();
        let (s, ci) = m.second_at(12, 15);
        let chaos = second_moment_chaos(&c, 0.25, 0.0, &ChaosQuadrature::default()).unwrap();
        assert!(s > 1.0);
        assert!((s - chaos.value).abs() <= (3.0 * ci).max(0.15 * chaos.value), "{s} ± {ci} vs {}", chaos.value);
    }
}
