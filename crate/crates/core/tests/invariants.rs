use fracspde::chaos::{bound_terms, case_exponent, check_conditions, compute_ell, ConvergenceInputs};
use fracspde::duhamel::{deterministic_solve, ForcingSpec, SimulationConfig, SpaceGrid, TimeGrid};
use fracspde::greens::{EnvelopeParams, InitialData, Kernel, KernelKind, Profile};
use fracspde::noise::{sample_field, space_cov, NoiseGrid, NoiseSpec, SpaceKernel, TimeKernel, UniformGrid};
use fracspde::quadcheck::{dirichlet_simplex, simplex_closed_form};
use fracspde::specfun::{mittag_leffler, recip_gamma, wright_phi};
use fracspde::{FractionalOrder, SeriesControl};
use proptest::prelude::*;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![0.51f64..0.99, 1.01f64..1.99]
}

fn inputs(a: f64, space: SpaceKernel, d: usize) -> ConvergenceInputs {
    let noise = NoiseSpec::new(TimeKernel::Constant { c: 1.0 }, space, d);
    ConvergenceInputs::new(order(a), noise, 1.0).unwrap()
}

proptest! {
    #[test]
    fn recip_gamma_recurrence(x in -12.0f64..12.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let lhs = recip_gamma(x);
        let rhs = x * recip_gamma(x + 1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300), "{lhs} vs {rhs}");
    }

    #[test]
    fn wright_at_zero_is_recip_gamma(a in -0.99f64..-0.01, delta in -3.0f64..5.0) {
        prop_assert_eq!(wright_phi(a, delta, 0.0, SeriesControl::default()).unwrap(), recip_gamma(delta));
    }

    #[test]
    fn mittag_leffler_one_one_is_exp(z in -20.0f64..5.0) {
        let v = mittag_leffler(1.0, 1.0, z, SeriesControl::default()).unwrap();
        prop_assert!((v - z.exp()).abs() <= 1e-10 * z.exp());
    }

    #[test]
    fn y_is_self_similar(a in alpha(), d in 1usize..=3, t in 0.05f64..3.0, s in 0.1f64..10.0, y in 0.05f64..3.0) {
        let k = Kernel::new(KernelKind::Y, order(a), d).unwrap();
        let e = a * (2.0 - d as f64) / 2.0 - 1.0;
        let lhs = k.radial(s * t, (s * t).powf(a / 2.0) * y).unwrap() * (s * t).powf(-e);
        let rhs = k.radial(t, t.powf(a / 2.0) * y).unwrap() * t.powf(-e);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn y_envelope_exponents_match_the_threshold(a in 1.01f64..1.99, d in 1usize..=5, gamma in 0.05f64..1.0) {
        // ν₁ anywhere in (2 - 2/α, γ) when that interval is nonempty
        let lo = 2.0 - 2.0 / a;
        prop_assume!(gamma > lo + 1e-6);
        let nu1 = 0.5 * (lo + gamma);
        let p = EnvelopeParams::for_y(order(a), d, gamma, Some(nu1)).unwrap();
        let target = d as f64 - 2.0 + 1.0 / a;
        prop_assert!((p.combined_exponent() - target).abs() < 1e-12, "{} vs {target}", p.combined_exponent());
    }

    #[test]
    fn covariances_are_even(v in prop::collection::vec(0.05f64..3.0, 2), kappa in 0.1f64..1.9, h in 0.51f64..0.99) {
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        let mixed = vec![v[0], -v[1]];
        for k in [
            SpaceKernel::Fractional { hurst: vec![h, 1.25 - h / 2.0] },
            SpaceKernel::Riesz { kappa, constant: 1.0 },
            SpaceKernel::Bessel { kappa, constant: 1.0 },
        ] {
            let base = space_cov(&k, &v).unwrap();
            prop_assert_eq!(base, space_cov(&k, &neg).unwrap());
            prop_assert_eq!(base, space_cov(&k, &mixed).unwrap());
        }
    }

    #[test]
    fn fractional_covariance_factorizes(v in prop::collection::vec(0.05f64..3.0, 3), h in prop::collection::vec(0.51f64..0.99, 3)) {
        let full = space_cov(&SpaceKernel::Fractional { hurst: h.clone() }, &v).unwrap();
        let product: f64 = h
            .iter()
            .zip(&v)
            .map(|(hi, vi)| space_cov(&SpaceKernel::Fractional { hurst: vec![*hi] }, &[*vi]).unwrap())
            .product();
        prop_assert!((full - product).abs() <= 1e-14 * full.abs());
    }

    #[test]
    fn riesz_is_dominated_by_a_product(v in prop::collection::vec(0.01f64..5.0, 1..=4), kappa in 0.05f64..1.0) {
        // |x| ≥ √d (∏|x_i|)^{1/d}, so |x|^{-κ} ≤ d^{-κ/2} ∏|x_i|^{-κ/d}
        let d = v.len();
        let kappa = kappa * d as f64;
        let lhs = space_cov(&SpaceKernel::Riesz { kappa, constant: 1.0 }, &v).unwrap();
        let rhs = (d as f64).powf(-kappa / 2.0) * v.iter().map(|x| x.powf(-kappa / d as f64)).product::<f64>();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }

    #[test]
    fn fractional_threshold(a in alpha(), h in prop::collection::vec(0.501f64..0.999, 1..=3)) {
        let d = h.len();
        let sum: f64 = h.iter().sum();
        let target = d as f64 - 2.0 + 1.0 / a;
        prop_assume!((sum - target).abs() > 1e-9);
        let r = check_conditions(&inputs(a, SpaceKernel::Fractional { hurst: h }, d)).unwrap();
        prop_assert_eq!(r.ell > -0.5, sum > target);
    }

    #[test]
    fn riesz_and_bessel_threshold(a in alpha(), d in 1usize..=3, frac in 0.01f64..0.99, bessel in any::<bool>()) {
        let kappa = frac * d as f64;
        prop_assume!((kappa - (4.0 - 2.0 / a)).abs() > 1e-9);
        let space = if bessel {
            SpaceKernel::Bessel { kappa, constant: 1.0 }
        } else {
            SpaceKernel::Riesz { kappa, constant: 1.0 }
        };
        let r = check_conditions(&inputs(a, space, d)).unwrap();
        prop_assert_eq!(r.ell > -0.5, kappa < 4.0 - 2.0 / a);
    }

    #[test]
    fn degenerate_exponent_grows_with_epsilon(e1 in 0.001f64..1.0, e2 in 0.001f64..1.0) {
        // α = 1.5, d = 3: κ_d = -1 and H = 2/3 put every coordinate on the degenerate branch
        let i = inputs(1.5, SpaceKernel::Fractional { hurst: vec![2.0 / 3.0; 3] }, 3);
        let ell = compute_ell(&i).unwrap();
        let (c1, c2) = (case_exponent(&i, e1).unwrap(), case_exponent(&i, e2).unwrap());
        prop_assert!((c1.ell - ell - 3.0 * 1.5 / 4.0 * e1).abs() < 1e-12);
        prop_assert_eq!(c1.ell < c2.ell, e1 < e2);
    }

    #[test]
    fn summability_follows_the_margin(ell in -1.5f64..2.0, c_t in 0.1f64..10.0, t in 0.1f64..4.0) {
        let s = bound_terms(ell, 1.0, c_t, t, 40);
        prop_assert_eq!(s.summable, ell + 0.5 > 0.0);
    }

    #[test]
    fn simplex_matches_closed_form(n in 1usize..=2, h in -0.9f64..1.5, t in 0.2f64..3.0) {
        let c = dirichlet_simplex(n, h, t).unwrap();
        prop_assert!(c.rel_error() < 1e-5, "{c:?}");
        prop_assert_eq!(c.closed_form, simplex_closed_form(n, h, t));
    }
}

fn small_config(alpha: f64, amplitude: f64) -> SimulationConfig {
    SimulationConfig {
        schema: 1,
        alpha,
        d: 1,
        noise: NoiseSpec::new(TimeKernel::Constant { c: 1.0 }, SpaceKernel::Fractional { hurst: vec![0.75] }, 1),
        initial: InitialData::new(
            Profile::GaussianBump {
                amplitude,
                width: 0.4,
                center: vec![0.1],
            },
            (alpha > 1.0).then_some(Profile::Zero),
        ),
        t_grid: TimeGrid { t_max: 0.2, steps: 3 },
        x_grid: SpaceGrid {
            lo: -1.0,
            hi: 1.0,
            cells: 5,
        },
        seed: 0,
        picard_iters: 1,
        chaos_order: 2,
        forcing: ForcingSpec::Zero,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn deterministic_solution_is_linear_in_u0(a in prop_oneof![Just(0.75), Just(1.5)], c in -4.0f64..4.0, k in -2.0f64..2.0) {
        // linear forcing f = k u keeps the map u₀ ↦ u linear
        let f = move |_: f64, _: f64, u: f64| k * u;
        let base = deterministic_solve(&small_config(a, 1.0), &f).unwrap();
        let scaled = deterministic_solve(&small_config(a, c), &f).unwrap();
        for (b, s) in base.values.iter().zip(&scaled.values) {
            prop_assert!((c * b - s).abs() <= 1e-12 * (c * b).abs().max(1e-12), "{} vs {s}", c * b);
        }
    }

    #[test]
    fn noise_samples_are_reproducible(seed in any::<u64>()) {
        let spec = NoiseSpec::new(TimeKernel::Exponential { rate: 2.0 }, SpaceKernel::Fractional { hurst: vec![0.7] }, 1);
        let grid = NoiseGrid {
            time: UniformGrid::new(0.0, 0.1, 4).unwrap(),
            space: vec![UniformGrid::new(-1.0, 0.25, 8).unwrap()],
        };
        let a = sample_field(&spec, &grid, seed).unwrap();
        let b = sample_field(&spec, &grid, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
