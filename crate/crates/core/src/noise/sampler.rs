//! Dense Gaussian sampling of cell increments ΔW = ∫_cell W(ds, dy).
//!
//! The increment covariance is T ⊗ S (time ⊗ space), and S is itself a
//! Kronecker product over axes for the fractional kernel. Each factor is
//! square-rooted through its symmetric eigendecomposition.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{space_cell_cov, time_cell_cov, NoiseSpec, SpaceKernel};
use crate::error::{Error, Result};

/// Default limit on time cells × space cells.
pub const DEFAULT_CELL_CAP: usize = 4096;

/// `cells` intervals [start + i·step, start + (i+1)·step].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub cells: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, cells: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) {
            return Err(Error::invalid("grid", format!("step {step} must be finite and > 0")));
        }
        if cells == 0 {
            return Err(Error::GridTooShort { needed: 1, got: 0 });
        }
        Ok(UniformGrid { start, step, cells })
    }

    /// Grid of `cells` cells covering [lo, hi].
    pub fn covering(lo: f64, hi: f64, cells: usize) -> Result<Self> {
        Self::new(lo, (hi - lo) / cells.max(1) as f64, cells)
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.start + i as f64 * self.step, self.start + (i + 1) as f64 * self.step)
    }

    pub fn center(&self, i: usize) -> f64 {
        self.start + (i as f64 + 0.5) * self.step
    }

    pub fn end(&self) -> f64 {
        self.start + self.cells as f64 * self.step
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseGrid {
    pub time: UniformGrid,
    pub space: Vec<UniformGrid>,
}

impl NoiseGrid {
    pub fn space_cells(&self) -> usize {
        self.space.iter().map(|g| g.cells).product()
    }

    pub fn total_cells(&self) -> usize {
        self.time.cells * self.space_cells()
    }

    /// Per-axis indices of a flat space cell index (axis 0 slowest).
    pub fn unflatten(&self, mut cell: usize) -> Vec<usize> {
        let mut idx = vec![0; self.space.len()];
        for (a, g) in self.space.iter().enumerate().rev() {
            idx[a] = cell % g.cells;
            cell /= g.cells;
        }
        idx
    }
}

/// One draw of the increments, stored time-major: values[k·n_space + j].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseField {
    pub grid: NoiseGrid,
    pub seed: u64,
    pub draw: u64,
    pub values: Vec<f64>,
}

impl NoiseField {
    pub fn get(&self, t_index: usize, cell: usize) -> f64 {
        self.values[t_index * self.grid.space_cells() + cell]
    }

    /// CSV with header `t_index,x1..xd,value` (cell centres).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.grid.space.len();
        let mut header = String::from("t_index");
        for i in 1..=d {
            header.push_str(&format!(",x{i}"));
        }
        writeln!(out, "{header},value")?;
        let ns = self.grid.space_cells();
        for k in 0..self.grid.time.cells {
            for j in 0..ns {
                let idx = self.grid.unflatten(j);
                let coords: Vec<String> = idx
                    .iter()
                    .zip(&self.grid.space)
                    .map(|(i, g)| format!("{:e}", g.center(*i)))
                    .collect();
                writeln!(out, "{k},{},{:e}", coords.join(","), self.values[k * ns + j])?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Factor {
    cov: DMatrix<f64>,
    root: DMatrix<f64>,
}

fn factorize(cov: DMatrix<f64>) -> Result<Factor> {
    let trace = cov.trace();
    let eig = SymmetricEigen::new(cov.clone());
    let clipped: f64 = eig.eigenvalues.iter().filter(|l| **l < 0.0).map(|l| -l).sum();
    let limit = 1e-6 * trace.abs();
    if clipped > limit {
        return Err(Error::NotPositiveSemidefinite { clipped, limit });
    }
    let sqrt = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt);
    Ok(Factor { cov, root })
}

fn toeplitz(n: usize, entry: impl Fn(usize) -> Result<f64> + Sync) -> Result<DMatrix<f64>> {
    let row = (0..n).into_par_iter().map(&entry).collect::<Result<Vec<f64>>>()?;
    Ok(DMatrix::from_fn(n, n, |i, j| row[i.abs_diff(j)]))
}

/// Multiplies the tensor `x` (row-major with shape `dims`) by `m` along `axis`.
fn apply_axis(x: &mut [f64], dims: &[usize], axis: usize, m: &DMatrix<f64>) {
    let n = dims[axis];
    let inner: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let mut buf = vec![0.0; n];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * n * inner + i;
            for (r, b) in buf.iter_mut().enumerate() {
                *b = (0..n).map(|c| m[(r, c)] * x[base + c * inner]).sum();
            }
            for (r, b) in buf.iter().enumerate() {
                x[base + r * inner] = *b;
            }
        }
    }
}

/// Assembled and factorized increment covariance for one spec and grid.
#[derive(Debug, Clone)]
pub struct FieldSampler {
    spec: NoiseSpec,
    grid: NoiseGrid,
    dims: Vec<usize>,
    factors: Vec<Factor>,
}

impl FieldSampler {
    pub fn new(spec: &NoiseSpec, grid: &NoiseGrid) -> Result<Self> {
        Self::with_cap(spec, grid, DEFAULT_CELL_CAP)
    }

    pub fn with_cap(spec: &NoiseSpec, grid: &NoiseGrid, cap: usize) -> Result<Self> {
        spec.check()?;
        if grid.space.len() != spec.d {
            return Err(Error::invalid("grid", format!("{} space axes for d = {}", grid.space.len(), spec.d)));
        }
        if grid.total_cells() > cap {
            return Err(Error::invalid(
                "grid",
                format!("{} cells exceed the cap of {cap}", grid.total_cells()),
            ));
        }
        let tg = grid.time;
        let time = toeplitz(tg.cells, |k| Ok(time_cell_cov(&spec.time, tg.cell(k), tg.cell(0))))?;
        let mut factors = vec![factorize(time)?];
        let mut dims = vec![tg.cells];
        match &spec.space {
            SpaceKernel::Fractional { hurst } => {
                for (axis, g) in grid.space.iter().enumerate() {
                    let k1 = SpaceKernel::Fractional {
                        hurst: vec![hurst[axis]],
                    };
                    let m = toeplitz(g.cells, |j| space_cell_cov(&k1, &[g.cell(j)], &[g.cell(0)]))?;
                    factors.push(factorize(m)?);
                    dims.push(g.cells);
                }
            }
            k if spec.d == 1 => {
                let g = grid.space[0];
                let m = toeplitz(g.cells, |j| space_cell_cov(k, &[g.cell(j)], &[g.cell(0)]))?;
                factors.push(factorize(m)?);
                dims.push(g.cells);
            }
            k => {
                // radial kernel: entries depend on |offset| per axis
                let n = grid.space_cells();
                let isotropic = grid.space.windows(2).all(|w| w[0].step == w[1].step);
                let key = |i: usize, j: usize| {
                    let (a, b) = (grid.unflatten(i), grid.unflatten(j));
                    let mut off: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).collect();
                    if isotropic {
                        off.sort_unstable();
                    }
                    off
                };
                let mut keys: Vec<Vec<usize>> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| key(i, j)).collect();
                keys.sort();
                keys.dedup();
                let values = keys
                    .par_iter()
                    .map(|off| {
                        let a: Vec<(f64, f64)> = off
                            .iter()
                            .zip(&grid.space)
                            .map(|(o, g)| (*o as f64 * g.step, (*o + 1) as f64 * g.step))
                            .collect();
                        let b: Vec<(f64, f64)> = grid.space.iter().map(|g| (0.0, g.step)).collect();
                        space_cell_cov(k, &a, &b).map(|v| (off.clone(), v))
                    })
                    .collect::<Result<HashMap<Vec<usize>, f64>>>()?;
                let m = DMatrix::from_fn(n, n, |i, j| values[&key(i, j)]);
                factors.push(factorize(m)?);
                dims.push(n);
            }
        }
        Ok(FieldSampler {
            spec: spec.clone(),
            grid: grid.clone(),
            dims,
            factors,
        })
    }

    pub fn grid(&self) -> &NoiseGrid {
        &self.grid
    }

    pub fn spec(&self) -> &NoiseSpec {
        &self.spec
    }

    fn tensor_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for (a, n) in self.dims.iter().enumerate().rev() {
            idx[a] = flat % n;
            flat /= n;
        }
        idx
    }

    /// Model covariance between flat indices k·n_space + j.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.tensor_index(i), self.tensor_index(j));
        let amp = self.spec.amplitude;
        self.factors
            .iter()
            .zip(a.iter().zip(&b))
            .fold(amp * amp, |acc, (f, (x, y))| acc * f.cov[(*x, *y)])
    }

    pub fn covariance_matrix(&self) -> DMatrix<f64> {
        let n = self.grid.total_cells();
        DMatrix::from_fn(n, n, |i, j| self.covariance(i, j))
    }

    /// Draw number `draw` for `seed`; identical arguments give identical bits.
    pub fn sample(&self, seed: u64, draw: u64) -> NoiseField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(draw);
        let n = self.grid.total_cells();
        let mut x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        for (axis, f) in self.factors.iter().enumerate() {
            apply_axis(&mut x, &self.dims, axis, &f.root);
        }
        let amp = self.spec.amplitude;
        x.iter_mut().for_each(|v| *v *= amp);
        NoiseField {
            grid: self.grid.clone(),
            seed,
            draw,
            values: x,
        }
    }

    /// Row-major little-endian f64 matrix plus a JSON sidecar describing it.
    pub fn write_covariance(&self, matrix: &Path, sidecar: &Path, seed: Option<u64>) -> Result<()> {
        let m = self.covariance_matrix();
        let n = m.nrows();
        let mut bytes = Vec::with_capacity(8 * n * n);
        for i in 0..n {
            for j in 0..n {
                bytes.extend_from_slice(&m[(i, j)].to_le_bytes());
            }
        }
        std::fs::write(matrix, bytes)?;
        let meta = serde_json::json!({
            "dims": [n, n],
            "layout": "row-major f64 little-endian",
            "grid": self.grid,
            "spec": self.spec,
            "seed": seed,
        });
        std::fs::write(sidecar, serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }
}

/// First draw of the field for `seed`.
pub fn sample_field(spec: &NoiseSpec, grid: &NoiseGrid, seed: u64) -> Result<NoiseField> {
    Ok(FieldSampler::new(spec, grid)?.sample(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::TimeKernel;

    fn grid_1d(nt: usize, nx: usize) -> NoiseGrid {
        NoiseGrid {
            time: UniformGrid::new(0.0, 0.1, nt).unwrap(),
            space: vec![UniformGrid::new(-1.0, 0.25, nx).unwrap()],
        }
    }

    fn spec(time: TimeKernel, space: SpaceKernel, d: usize) -> NoiseSpec {
        NoiseSpec::new(time, space, d)
    }

    #[test]
    fn deterministic_given_seed() {
        let s = spec(TimeKernel::Exponential { rate: 1.0 }, SpaceKernel::Fractional { hurst: vec![0.7] }, 1);
        let sampler = FieldSampler::new(&s, &grid_1d(5, 8)).unwrap();
        assert_eq!(sampler.sample(7, 3).values, sampler.sample(7, 3).values);
        assert_ne!(sampler.sample(7, 3).values, sampler.sample(7, 4).values);
        assert_ne!(sampler.sample(7, 3).values, sampler.sample(8, 3).values);
    }

    #[test]
    fn moments_match_the_model() {
        let s = spec(
            TimeKernel::RieszTime { beta: 0.3 },
            SpaceKernel::Riesz {
                kappa: 0.5,
                constant: 1.0,
            },
            1,
        );
        let sampler = FieldSampler::new(&s, &grid_1d(4, 6)).unwrap();
        let (i, j) = (6 + 2, 2 * 6 + 3);
        let n = 10_000;
        let (mut m, mut c, mut c2) = (0.0, 0.0, 0.0);
        for draw in 0..n {
            let f = sampler.sample(11, draw);
            let (a, b) = (f.values[i], f.values[j]);
            m += a;
            c += a * b;
            c2 += (a * b) * (a * b);
        }
        let nf = n as f64;
        let var = sampler.covariance(i, i);
        assert!((m / nf).abs() < 4.0 * (var / nf).sqrt());
        let mean_c = c / nf;
        let se = ((c2 / nf - mean_c * mean_c) / nf).sqrt();
        assert!((mean_c - sampler.covariance(i, j)).abs() < 5.0 * se);
    }

    #[test]
    fn constant_time_kernel_blocks() {
        // λ ≡ c makes every time slab carry the same spatial increment pattern
        let s = spec(TimeKernel::Constant { c: 2.0 }, SpaceKernel::Fractional { hurst: vec![0.8] }, 1);
        let g = grid_1d(3, 5);
        let sampler = FieldSampler::new(&s, &g).unwrap();
        for k in 0..3 {
            for kp in 0..3 {
                for j in 0..5 {
                    let model = sampler.covariance(k * 5 + j, kp * 5 + j);
                    assert!((model - sampler.covariance(j, j)).abs() < 1e-14);
                }
            }
        }
        let f = sampler.sample(1, 0);
        for j in 0..5 {
            // rank-one T: only square roots of roundoff eigenvalues separate the slabs
            assert!((f.get(0, j) - f.get(2, j)).abs() < 1e-6);
        }
    }

    #[test]
    fn empirical_covariance_two_dimensional_radial() {
        let s = spec(
            TimeKernel::Exponential { rate: 2.0 },
            SpaceKernel::Riesz {
                kappa: 1.0,
                constant: 1.0,
            },
            2,
        );
        let g = NoiseGrid {
            time: UniformGrid::new(0.0, 0.2, 2).unwrap(),
            space: vec![UniformGrid::new(0.0, 0.5, 3).unwrap(); 2],
        };
        let sampler = FieldSampler::new(&s, &g).unwrap();
        let cov = sampler.covariance_matrix();
        assert!((&cov - cov.transpose()).amax() < 1e-15);
        let (i, j) = (4, 9 + 5);
        let n = 10_000;
        let mut c = 0.0;
        let mut c2 = 0.0;
        for draw in 0..n {
            let f = sampler.sample(5, draw);
            let p = f.values[i] * f.values[j];
            c += p;
            c2 += p * p;
        }
        let nf = n as f64;
        let mean = c / nf;
        let se = ((c2 / nf - mean * mean) / nf).sqrt();
        assert!((mean - cov[(i, j)]).abs() < 5.0 * se);
    }

    #[test]
    fn cap_and_csv() {
        let s = spec(TimeKernel::Constant { c: 1.0 }, SpaceKernel::Fractional { hurst: vec![0.7] }, 1);
        assert!(FieldSampler::with_cap(&s, &grid_1d(10, 10), 50).is_err());
        let f = sample_field(&s, &grid_1d(2, 3), 4).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with("t_index,x1,value"));
    }

    #[test]
    fn covariance_export() {
        let s = spec(TimeKernel::Constant { c: 1.0 }, SpaceKernel::Fractional { hurst: vec![0.7] }, 1);
        let sampler = FieldSampler::new(&s, &grid_1d(2, 2)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (m, j) = (dir.path().join("cov.bin"), dir.path().join("cov.json"));
        sampler.write_covariance(&m, &j, Some(3)).unwrap();
        let bytes = std::fs::read(&m).unwrap();
        assert_eq!(bytes.len(), 16 * 8);
        let first = f64::from_le_bytes(bytes[..8].try_into().unwrap());
        assert_eq!(first, sampler.covariance(0, 0));
        let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&j).unwrap()).unwrap();
        assert_eq!(meta["dims"][0], 4);
    }
}
