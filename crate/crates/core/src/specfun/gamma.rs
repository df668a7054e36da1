//! Gamma function family via the Lanczos approximation (g = 7, n = 9).

use std::f64::consts::PI;

#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const FACTORIALS: [f64; 21] = {
    let mut t = [1.0; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as f64;
        i += 1;
    }
    t
};
const G: f64 = 7.0;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn lanczos_sum(xm1: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (xm1 + i as f64);
    }
    a
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    let r = x - 2.0 * (0.5 * x).round();
    let (s, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    s * (PI * r).sin()
}

fn gamma_positive(x: f64) -> f64 {
    // x >= 0.5
    let xm1 = x - 1.0;
    let t = xm1 + G + 0.5;
    let half = t.powf(0.5 * (xm1 + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(xm1)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return (PI / sin_pi(x)).ln() - ln_gamma(1.0 - x);
    }
    let xm1 = x - 1.0;
    let t = xm1 + G + 0.5;
    LN_SQRT_2PI + (xm1 + 0.5) * t.ln() - t + lanczos_sum(xm1).ln()
}

/// Γ(x). Returns ±∞ at the poles.
pub fn gamma(x: f64) -> f64 {
    let r = recip_gamma(x);
    if r == 0.0 {
        return f64::INFINITY;
    }
    1.0 / r
}

/// 1/Γ(x), an entire function: exactly zero at 0, -1, -2, ...
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if (1.0..=21.0).contains(&x) && x == x.floor() {
        return 1.0 / FACTORIALS[x as usize - 1];
    }
    if x >= 0.5 {
        if x < 171.0 {
            1.0 / gamma_positive(x)
        } else {
            (-ln_gamma(x)).exp()
        }
    } else {
        // reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
        let y = 1.0 - x;
        let s = sin_pi(x);
        if y < 171.0 {
            s * gamma_positive(y) / PI
        } else {
            s.signum() * (s.abs().ln() + ln_gamma(y) - PI.ln()).exp()
        }
    }
}

/// ln|1/Γ(x)| together with the sign of 1/Γ(x); `None` at the poles.
pub fn ln_recip_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x <= 0.0 && x == x.floor() {
        return None;
    }
    if x > 0.0 {
        Some((-ln_gamma(x), 1.0))
    } else {
        let s = sin_pi(x);
        Some((s.abs().ln() + ln_gamma(1.0 - x) - PI.ln(), s.signum()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(recip_gamma(1.0), 1.0);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert!((recip_gamma(0.5) - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_holds() {
        let mut x = -20.3;
        while x < 48.0 {
            let lhs = recip_gamma(x);
            let rhs = x * recip_gamma(x + 1.0);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "x={x}: {lhs} vs {rhs}");
            x += 0.37;
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.1, 0.7, 1.5, 10.25, 60.0] {
            assert!((ln_gamma(x) - gamma(x).ln()).abs() < 1e-12 * ln_gamma(x).abs().max(1.0));
        }
    }

    #[test]
    fn signed_log_matches() {
        for &x in &[-4.5, -0.3, 0.2, 3.3] {
            let (l, s) = ln_recip_gamma_signed(x).unwrap();
            assert!((s * l.exp() - recip_gamma(x)).abs() < 1e-13 * recip_gamma(x).abs());
        }
        assert!(ln_recip_gamma_signed(-2.0).is_none());
    }
}
