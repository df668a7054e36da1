//! One-dimensional quadrature: globally adaptive Gauss–Kronrod (21 points)
//! and fixed composite Gauss–Legendre rules.
//!
//! Multidimensional integrals elsewhere in the crate are built by nesting
//! these rules. Infinite ranges are always truncated by the caller, which
//! knows the decay of its integrand.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Stopping rule for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance {
            rel,
            ..Default::default()
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod21(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err, resabs)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate(f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Adaptive integration over `[points[0], points[last]]`, with the interior
/// points used as initial subdivision (place them at known singularities).
pub fn integrate_with_breaks(
    mut f: impl FnMut(f64) -> f64,
    points: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    if points.len() < 2 {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    // Segments too short to split further are retired here.
    let mut frozen_err = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (value, error, resabs) = kronrod21(&mut f, a, b);
        total += value;
        total_abs += resabs;
        total_err += error;
        heap.push(Segment { a, b, value, error });
    }
    let mut count = heap.len();
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::QuadratureFailure {
                value: total,
                error: total_err,
            });
        }
        // the roundoff floor of the rule counts as converged
        let floor = 100.0 * f64::EPSILON * total_abs;
        if total_err <= tol.abs.max(tol.rel * total.abs()).max(floor) {
            return Ok(Estimate {
                value: total,
                error: total_err,
            });
        }
        let seg = match heap.pop() {
            Some(s) => s,
            None => {
                return Err(Error::QuadratureFailure {
                    value: total,
                    error: total_err,
                })
            }
        };
        let mid = 0.5 * (seg.a + seg.b);
        let scale = seg.a.abs().max(seg.b.abs()).max(f64::MIN_POSITIVE);
        if (seg.b - seg.a).abs() < 1e3 * f64::EPSILON * scale {
            frozen_err += seg.error;
            if heap.is_empty() || frozen_err > tol.abs.max(tol.rel * total.abs()) {
                return Err(Error::QuadratureFailure {
                    value: total,
                    error: total_err,
                });
            }
            continue;
        }
        if count >= tol.max_intervals {
            return Err(Error::QuadratureFailure {
                value: total,
                error: total_err,
            });
        }
        let (v1, e1, _) = kronrod21(&mut f, seg.a, mid);
        let (v2, e2, _) = kronrod21(&mut f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        count += 1;
    }
}

/// Like [`integrate_with_breaks`] but returns the partial estimate instead of
/// failing when the interval budget runs out. Used inside nested integrals
/// where the outer level accounts for the accumulated error.
pub fn integrate_lenient(
    f: impl FnMut(f64) -> f64,
    points: &[f64],
    tol: Tolerance,
) -> Estimate {
    match integrate_with_breaks(f, points, tol) {
        Ok(e) => e,
        Err(Error::QuadratureFailure { value, error }) => Estimate { value, error },
        Err(_) => unreachable!("adaptive quadrature only fails with QuadratureFailure"),
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A fixed composite Gauss–Legendre rule over given panel edges.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(edges: &[f64], order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(edges.len().saturating_sub(1) * order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for e in edges.windows(2) {
            let c = 0.5 * (e[0] + e[1]);
            let h = 0.5 * (e[1] - e[0]);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(c + h * xi);
                weights.push(h * wi);
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Panel edges on `[a, b]` refined geometrically toward `a`: the first panel
/// has width `(b - a) * ratio^(panels - 1)`.
pub fn graded_edges(a: f64, b: f64, panels: usize, ratio: f64) -> Vec<f64> {
    assert!(panels >= 1);
    let mut edges = Vec::with_capacity(panels + 1);
    edges.push(a);
    for k in (0..panels).rev() {
        edges.push(a + (b - a) * ratio.powi(k as i32));
    }
    edges
}

/// Kahan–Babuška–Neumaier running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Tanh–sinh rule with step `h`; exponentially convergent for integrands
/// with algebraic endpoint singularities.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    h: f64,
    /// (1 - x_k, w_k) for k = 0, 1, ... with x_k = tanh(π/2 sinh(kh)).
    nodes: Vec<(f64, f64)>,
}

impl TanhSinh {
    pub fn new(h: f64) -> Self {
        assert!(h > 0.0);
        let mut nodes = Vec::new();
        let half_pi = std::f64::consts::FRAC_PI_2;
        for k in 0.. {
            let kh = k as f64 * h;
            let u = half_pi * kh.sinh();
            let comp = (-u).exp() / u.cosh();
            let w = half_pi * kh.cosh() / (u.cosh() * u.cosh());
            if comp < 1e-300 || w < 1e-300 {
                break;
            }
            nodes.push((comp, w));
        }
        TanhSinh { h, nodes }
    }

    /// ∫_a^b f; `f` receives (x, x - a, b - x) so that distances to the
    /// endpoints are free of cancellation.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64, f64, f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mut sum = CompensatedSum::new();
        for (k, &(comp, w)) in self.nodes.iter().enumerate() {
            let near = half * comp;
            let far = (b - a) - near;
            let v = f(a + near, near, far) + if k > 0 { f(b - near, far, near) } else { 0.0 };
            sum.add(w * v);
        }
        self.h * half * sum.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, Tolerance::default()).unwrap();
        assert!((e.value - 0.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let e = integrate(|x| x.powf(-0.5), 0.0, 1.0, Tolerance::rel(1e-10)).unwrap();
        assert!((e.value - 2.0).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn interior_break() {
        // ∫_{-1}^{1} |x|^{-0.3} dx = 2/0.7
        let e = integrate_with_breaks(|x: f64| x.abs().powf(-0.3), &[-1.0, 0.0, 1.0], Tolerance::rel(1e-11))
            .unwrap();
        assert!((e.value - 2.0 / 0.7).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-9, 1.0, Tolerance::rel(1e-14).with_max_intervals(10));
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in [1, 2, 5, 12, 31] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
            // exact for degree 2n-1
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * n as i32 - 2)).sum();
            assert!((m - 2.0 / (2 * n - 1) as f64).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::new();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 x^{-0.4} (1 - x)^{0.3} dx = B(0.6, 1.3)
        let rule = TanhSinh::new(1.0 / 16.0);
        let v = rule.integrate(0.0, 1.0, |_, l, r| l.powf(-0.4) * r.powf(0.3));
        let exact = crate::specfun::gamma(0.6) * crate::specfun::gamma(1.3) / crate::specfun::gamma(1.9);
        assert!((v - exact).abs() < 1e-12 * exact, "{v} vs {exact}");
        let v = rule.integrate(-1.0, 2.0, |x, _, _| x * x);
        assert!((v - 3.0).abs() < 1e-13);
    }
}
