//! Shared fixtures for the criterion benches.

use fracspde::duhamel::{ForcingSpec, SimulationConfig, SpaceGrid, TimeGrid};
use fracspde::greens::{InitialData, Profile};
use fracspde::noise::{NoiseGrid, NoiseSpec, SpaceKernel, TimeKernel, UniformGrid};

pub fn noise_spec(d: usize) -> NoiseSpec {
    NoiseSpec::new(
        TimeKernel::Exponential { rate: 2.0 },
        SpaceKernel::Fractional { hurst: vec![0.75; d] },
        d,
    )
}

pub fn noise_grid(steps: usize, cells: usize) -> NoiseGrid {
    NoiseGrid {
        time: UniformGrid::new(0.0, 1.0 / steps as f64, steps).expect("valid grid"),
        space: vec![UniformGrid::new(-1.0, 2.0 / cells as f64, cells).expect("valid grid")],
    }
}

/// One-dimensional run on `steps × cells` with a Gaussian bump start.
pub fn config(alpha: f64, steps: usize, cells: usize) -> SimulationConfig {
    SimulationConfig {
        schema: 1,
        alpha,
        d: 1,
        noise: NoiseSpec::new(TimeKernel::Constant { c: 1.0 }, SpaceKernel::Fractional { hurst: vec![0.75] }, 1),
        initial: InitialData::new(
            Profile::GaussianBump {
                amplitude: 1.0,
                width: 0.4,
                center: vec![0.0],
            },
            (alpha > 1.0).then_some(Profile::Zero),
        ),
        t_grid: TimeGrid { t_max: 0.5, steps },
        x_grid: SpaceGrid { lo: -2.0, hi: 2.0, cells },
        seed: 7,
        picard_iters: 2,
        chaos_order: 2,
        forcing: ForcingSpec::Zero,
    }
}
