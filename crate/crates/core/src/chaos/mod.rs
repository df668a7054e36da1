//! Well-posedness of (∂^α - B)u = u·Ẇ through the Wiener chaos expansion.
//!
//! E[u²(t,x)] = Σ n!‖fₙ‖², and the n-th term is bounded by
//! Cⁿ C_tⁿ Γ(2ℓ+1)ⁿ t^{(2ℓ+1)n} / Γ((2ℓ+1)n + 1), which sums when ℓ > -1/2.

mod spectral;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::{EnvelopeParams, KernelKind};
use crate::noise::{c_t, NoiseSpec, SpaceKernel, TimeKernel};
use crate::specfun::{ln_gamma, FractionalOrder};

pub use spectral::{chaos_term_direct, spectral_density, ChaosQuadrature, ChaosTerm, MlTable};

/// Name of the Riesz/Bessel condition.
pub const KAPPA_CONDITION: &str = "κ < 4 − 2/α";
/// Name of the fractional sum condition.
pub const SUM_H_CONDITION: &str = "Σ H_i > d − 2 + 1/α";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceInputs {
    pub alpha: FractionalOrder,
    pub d: usize,
    pub noise: NoiseSpec,
    /// Bound for Y used by the direct route to ℓ.
    pub envelope: EnvelopeParams,
    pub horizon_t: f64,
    pub c_t: f64,
}

impl ConvergenceInputs {
    /// Inputs with the default Y envelope (γ = 1, midpoint ν₁).
    pub fn new(alpha: FractionalOrder, noise: NoiseSpec, horizon_t: f64) -> Result<Self> {
        let envelope = EnvelopeParams::for_kernel(KernelKind::Y, alpha, noise.d)?;
        Self::with_envelope(alpha, noise, horizon_t, envelope)
    }

    pub fn with_envelope(
        alpha: FractionalOrder,
        noise: NoiseSpec,
        horizon_t: f64,
        envelope: EnvelopeParams,
    ) -> Result<Self> {
        noise.check()?;
        if !(horizon_t > 0.0 && horizon_t.is_finite()) {
            return Err(Error::invalid("t", format!("{horizon_t} must be finite and > 0")));
        }
        if envelope.d != noise.d || envelope.alpha != alpha {
            return Err(Error::invalid("envelope", "exponents belong to a different (alpha, d)"));
        }
        Ok(ConvergenceInputs {
            alpha,
            d: noise.d,
            c_t: c_t(&noise.time, horizon_t),
            noise,
            envelope,
            horizon_t,
        })
    }
}

/// H_i of the fractional reduction of the Riesz kernel, |x|^{-κ} ≤ C ∏|x_i|^{-κ/d}.
pub fn riesz_hurst(kappa: f64, d: usize) -> f64 {
    0.5 * (2.0 - kappa / d as f64)
}

fn hurst_sum(space: &SpaceKernel, d: usize) -> Option<f64> {
    match space {
        SpaceKernel::Fractional { hurst } => Some(hurst.iter().sum()),
        SpaceKernel::Riesz { kappa, .. } => Some(d as f64 * riesz_hurst(*kappa, d)),
        SpaceKernel::Bessel { .. } => None,
    }
}

/// ℓ from the envelope exponents (ζ_d, κ_d):
/// ζ_d + |H|α/2 + κ_dα/2 for product kernels, ζ_d - ακ/4 + ακ_d/2 + αd/2 for Bessel.
pub fn compute_ell(inputs: &ConvergenceInputs) -> Result<f64> {
    let a = inputs.alpha.alpha();
    let (zeta, kd) = (inputs.envelope.zeta, inputs.envelope.kappa);
    if inputs.envelope.d != inputs.d {
        return Err(Error::MissingEnvelope(a));
    }
    Ok(match &inputs.noise.space {
        SpaceKernel::Bessel { kappa, .. } => zeta - 0.25 * a * kappa + 0.5 * a * kd + 0.5 * a * inputs.d as f64,
        k => {
            let h = hurst_sum(k, inputs.d).expect("product kernel");
            zeta + 0.5 * h * a + 0.5 * kd * a
        }
    })
}

/// ℓ = α - 1 - αd/2 + α|H|/2, and α - 1 - ακ/4 for Riesz and Bessel.
pub fn ell_closed_form(alpha: FractionalOrder, d: usize, space: &SpaceKernel) -> f64 {
    let a = alpha.alpha();
    match space {
        SpaceKernel::Fractional { hurst } => a - 1.0 - 0.5 * a * d as f64 + 0.5 * a * hurst.iter().sum::<f64>(),
        SpaceKernel::Riesz { kappa, .. } | SpaceKernel::Bessel { kappa, .. } => a - 1.0 - 0.25 * a * kappa,
    }
}

/// Per-coordinate exponents θ_i of the fractional double-integral bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseExponent {
    pub theta: Vec<f64>,
    /// Some coordinate has 2H_i - 2 + κ_d/d = -1.
    pub degenerate: bool,
    pub epsilon: f64,
    /// ℓ, or ℓ' = ℓ + (αε/4)·#degenerate coordinates.
    pub ell: f64,
}

/// θ_i = (H_i d + κ_d)α/(2d), or (dε + κ_d + d)α/(4d) on the degenerate branch.
pub fn case_exponent(inputs: &ConvergenceInputs, epsilon: f64) -> Result<CaseExponent> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", format!("{epsilon} must be > 0")));
    }
    let d = inputs.d as f64;
    let a = inputs.alpha.alpha();
    let kd = inputs.envelope.kappa;
    let hurst: Vec<f64> = match &inputs.noise.space {
        SpaceKernel::Fractional { hurst } => hurst.clone(),
        SpaceKernel::Riesz { kappa, .. } => vec![riesz_hurst(*kappa, inputs.d); inputs.d],
        SpaceKernel::Bessel { .. } => {
            return Err(Error::invalid("space", "the Bessel kernel is not of product form"))
        }
    };
    let mut degenerate = false;
    let theta: Vec<f64> = hurst
        .iter()
        .map(|h| {
            if (2.0 * h - 2.0 + kd / d + 1.0).abs() < 1e-12 {
                degenerate = true;
                (d * epsilon + kd + d) * a / (4.0 * d)
            } else {
                (h * d + kd) * a / (2.0 * d)
            }
        })
        .collect();
    let ell = inputs.envelope.zeta + theta.iter().sum::<f64>();
    Ok(CaseExponent {
        theta,
        degenerate,
        epsilon,
        ell,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub satisfied: bool,
    /// Distance to the boundary; positive when satisfied.
    pub slack: f64,
}

fn condition(name: impl Into<String>, slack: f64) -> Condition {
    Condition {
        name: name.into(),
        satisfied: slack > 0.0,
        slack,
    }
}

/// Lower bound on each H_i: 1/2 for d ≤ 4, else 1 - 2/d (the γ → 0⁺ limit
/// of 1 - 2/d - γ/(2d) when α < 1).
pub fn hurst_floor(d: usize) -> f64 {
    if d <= 4 {
        0.5
    } else {
        1.0 - 2.0 / d as f64
    }
}

/// Bound series b₀..b_N with consecutive ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSeries {
    pub terms: Vec<f64>,
    pub ratios: Vec<f64>,
    /// 2ℓ + 1 ≤ 0: the simplex integrals diverge and the bound is void.
    pub divergent: bool,
    /// Σ bₙ < ∞. For 2ℓ + 1 > 0 the sum is the entire function
    /// E_{2ℓ+1}(c c_t Γ(2ℓ+1) t^{2ℓ+1}), so this is exactly !divergent;
    /// the ratios may still exceed 1 at moderate n.
    pub summable: bool,
}

/// bₙ = cⁿ c_tⁿ Γ(2ℓ+1)ⁿ t^{(2ℓ+1)n} / Γ((2ℓ+1)n+1), in log space.
///
/// When 2ℓ + 1 ≤ 0 the Γ(2ℓ+1)ⁿ factor is dropped and bₙ = (c c_t t^{2ℓ+1})ⁿ.
pub fn bound_terms(ell: f64, c: f64, c_t: f64, t: f64, n_max: usize) -> BoundSeries {
    let a = 2.0 * ell + 1.0;
    let divergent = a <= 0.0;
    let base = (c * c_t).ln() + a * t.ln();
    let terms: Vec<f64> = (0..=n_max)
        .map(|n| {
            let n = n as f64;
            if divergent {
                (n * base).exp()
            } else {
                (n * (base + ln_gamma(a)) - ln_gamma(a * n + 1.0)).exp()
            }
        })
        .collect();
    let ratios: Vec<f64> = terms.windows(2).map(|w| w[1] / w[0]).collect();
    BoundSeries {
        terms,
        ratios,
        divergent,
        summable: !divergent,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosReport {
    pub inputs: ConvergenceInputs,
    pub ell: f64,
    pub ell_closed_form: f64,
    /// ℓ + 1/2.
    pub margin: f64,
    pub threshold_ok: bool,
    pub verdict: bool,
    pub conditions: Vec<Condition>,
    pub bound_terms: Vec<f64>,
    pub ratios: Vec<f64>,
    pub summable: bool,
}

impl ChaosReport {
    pub fn failing(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.satisfied)
    }
}

/// Number of bound terms reported by [`check_conditions`].
pub const REPORT_TERMS: usize = 20;

/// Evaluates every hypothesis of the existence theorem with its slack.
pub fn check_conditions(inputs: &ConvergenceInputs) -> Result<ChaosReport> {
    let a = inputs.alpha.alpha();
    let d = inputs.d;
    let df = d as f64;
    let kd = inputs.envelope.kappa;
    let mut conditions = vec![
        condition(
            "λ nonnegative definite and locally integrable",
            match inputs.noise.time {
                TimeKernel::Constant { c } => c,
                TimeKernel::RieszTime { beta } => 1.0 - beta,
                TimeKernel::Exponential { rate } => rate,
            },
        ),
        condition("α ∈ (1/2, 1) ∪ (1, 2)", (a - 0.5).min((a - 1.0).abs()).min(2.0 - a)),
    ];
    let product_h2 = |h: f64| 2.0 * h + 2.0 * kd / df;
    match &inputs.noise.space {
        SpaceKernel::Fractional { hurst } => {
            let floor = hurst_floor(d);
            for (i, h) in hurst.iter().enumerate() {
                conditions.push(condition(format!("H_{} > {floor}", i + 1), h - floor));
            }
            conditions.push(condition(SUM_H_CONDITION, hurst.iter().sum::<f64>() - (df - 2.0 + 1.0 / a)));
            for (i, h) in hurst.iter().enumerate() {
                conditions.push(condition(format!("2H_{} + 2κ_d/d > 0", i + 1), product_h2(*h)));
            }
        }
        SpaceKernel::Riesz { kappa, .. } => {
            conditions.push(condition(KAPPA_CONDITION, 4.0 - 2.0 / a - kappa));
            conditions.push(condition("2H_i + 2κ_d/d > 0", product_h2(riesz_hurst(*kappa, d))));
        }
        SpaceKernel::Bessel { kappa, .. } => {
            conditions.push(condition(KAPPA_CONDITION, 4.0 - 2.0 / a - kappa));
        }
    }
    let ell = compute_ell(inputs)?;
    let margin = ell + 0.5;
    let series = bound_terms(ell, 1.0, inputs.c_t, inputs.horizon_t, REPORT_TERMS);
    Ok(ChaosReport {
        inputs: inputs.clone(),
        ell,
        ell_closed_form: ell_closed_form(inputs.alpha, d, &inputs.noise.space),
        margin,
        threshold_ok: margin > 0.0,
        verdict: conditions.iter().all(|c| c.satisfied),
        conditions,
        bound_terms: series.terms,
        ratios: series.ratios,
        summable: series.summable,
    })
}

/// Spatial kernel family for phase sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Fractional,
    Riesz,
    Bessel,
}

impl Family {
    /// Kernel with isotropic H (fractional) or κ.
    pub fn kernel(self, param: f64, d: usize) -> SpaceKernel {
        match self {
            Family::Fractional => SpaceKernel::Fractional { hurst: vec![param; d] },
            Family::Riesz => SpaceKernel::Riesz {
                kappa: param,
                constant: 1.0,
            },
            Family::Bessel => SpaceKernel::Bessel {
                kappa: param,
                constant: 1.0,
            },
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fractional" => Ok(Family::Fractional),
            "riesz" => Ok(Family::Riesz),
            "bessel" => Ok(Family::Bessel),
            _ => Err(Error::invalid("kernel", format!("`{s}` is not fractional, riesz or bessel"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub alpha: f64,
    pub param: f64,
    pub ell: f64,
    pub margin: f64,
    pub verdict: bool,
}

/// Verdicts over the cartesian grid alphas × params (constant λ ≡ 1).
pub fn phase_sweep(family: Family, d: usize, alphas: &[f64], params: &[f64], t: f64) -> Result<Vec<PhasePoint>> {
    let mut out = Vec::with_capacity(alphas.len() * params.len());
    for &a in alphas {
        let alpha = FractionalOrder::new(a)?;
        for &p in params {
            let noise = NoiseSpec::new(TimeKernel::Constant { c: 1.0 }, family.kernel(p, d), d);
            let report = check_conditions(&ConvergenceInputs::new(alpha, noise, t)?)?;
            out.push(PhasePoint {
                alpha: a,
                param: p,
                ell: report.ell,
                margin: report.margin,
                verdict: report.verdict,
            });
        }
    }
    Ok(out)
}

pub fn write_phase_csv<W: Write>(points: &[PhasePoint], mut out: W) -> Result<()> {
    writeln!(out, "alpha,param,ell,margin,verdict")?;
    for p in points {
        writeln!(out, "{},{},{:e},{:e},{}", p.alpha, p.param, p.ell, p.margin, p.verdict)?;
    }
    Ok(())
}
