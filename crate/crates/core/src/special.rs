//! Log-gamma, digamma and log-beta for positive real arguments.
//!
//! Both log-gamma and digamma shift the argument upward with the
//! recurrence until it is large enough for the asymptotic (Stirling)
//! series, which is then summed to well below `f64` resolution.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Arguments are shifted to at least this value before the series is used.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// B_{2k} / (2k (2k - 1)) for k = 1..8 (Stirling series for ln Γ).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// B_{2k} / (2k) for k = 1..8 (asymptotic series for ψ).
const DIGAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, x))
    }
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma argument", x)?;
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    // Shift up: ln Γ(x) = ln Γ(x + k) - ln(x (x+1) ... (x+k-1)).
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < ASYMPTOTIC_THRESHOLD {
        product *= shifted;
        shifted += 1.0;
    }
    let inv = 1.0 / shifted;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING {
        series += c * power;
        power *= inv2;
    }
    let stirling = (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_TWO_PI + series;
    stirling - product.ln()
}

/// Digamma function ψ(x) = d ln Γ(x) / dx for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma argument", x)?;
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut shifted = x;
    while shifted < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / shifted;
        shifted += 1.0;
    }
    let inv2 = 1.0 / (shifted * shifted);
    let mut series = 0.0;
    let mut power = inv2;
    for c in DIGAMMA_SERIES {
        series += c * power;
        power *= inv2;
    }
    shift + shifted.ln() - 0.5 / shifted - series
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b).
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    check_positive("ln_beta first argument", a)?;
    check_positive("ln_beta second argument", b)?;
    Ok(ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b))
}

/// Regularized incomplete beta I_x(a, b), with `y = 1 - x` supplied by the
/// caller so that neither tail suffers cancellation.
pub(crate) fn beta_reg(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * y.ln()
        - (ln_gamma_unchecked(a) + ln_gamma_unchecked(b) - ln_gamma_unchecked(a + b));
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_continued_fraction(a, b, x, y) / a
    } else {
        1.0 - ln_front.exp() * beta_continued_fraction(b, a, y, x) / b
    }
}

/// Modified Lentz evaluation of the continued fraction for I_x(a, b).
fn beta_continued_fraction(a: f64, b: f64, x: f64, y: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    // 1 - qab x / qap, written with y to keep precision when x ~ 1
    let mut d = (qap - qab * x) / qap;
    if y < 0.5 {
        d = (qap * y - (b - 1.0) * x) / qap;
    }
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=500 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn euler_constant_matches_integer_digamma() {
        assert_abs_diff_eq!(euler_gamma(), 0.577_215_664_90, epsilon = 1e-11);
        assert_abs_diff_eq!(digamma(1.0).unwrap() + euler_gamma(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(digamma(2.0).unwrap() + euler_gamma(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn digamma_reference_values() {
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -0.577_215_664_901_532_9, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(2.0).unwrap(), 0.422_784_335_098_467_1, epsilon = 1e-13);
        // ψ(1/2) = -γ - 2 ln 2
        assert_abs_diff_eq!(digamma(0.5).unwrap(), -1.963_510_026_021_423_5, epsilon = 1e-13);
        // ψ(1e-3) from mpmath
        assert_abs_diff_eq!(digamma(1e-3).unwrap(), -1000.575_571_931_810_3, epsilon = 1e-10);
        // large argument: ψ(1e6) = ln(1e6) - 1/(2e6) - 1/(12e12) + ...
        let big = 1e6_f64;
        let expected = big.ln() - 0.5 / big - 1.0 / (12.0 * big * big);
        assert_abs_diff_eq!(digamma(big).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn digamma_integer_identity() {
        let mut harmonic = 0.0;
        for k in 1..=50u32 {
            let expected = harmonic - EULER_GAMMA;
            assert_abs_diff_eq!(digamma(f64::from(k)).unwrap(), expected, epsilon = 1e-12);
            harmonic += 1.0 / f64::from(k);
        }
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_abs_diff_eq!(ln_gamma(1.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(2.0).unwrap(), 0.0, epsilon = 1e-14);
        let ln24 = 24f64.ln();
        assert!((ln_gamma(5.0).unwrap() - ln24).abs() <= 1e-13 * ln24);
        let ln_sqrt_pi = 0.5 * std::f64::consts::PI.ln();
        assert!((ln_gamma(0.5).unwrap() - ln_sqrt_pi).abs() <= 1e-13 * ln_sqrt_pi);
        // ln Γ(100) = ln(99!)
        let ln_fact: f64 = (1..100).map(|i| f64::from(i).ln()).sum();
        assert!((ln_gamma(100.0).unwrap() - ln_fact).abs() <= 1e-13 * ln_fact);
        // ln Γ(1e-3) from mpmath
        assert_abs_diff_eq!(ln_gamma(1e-3).unwrap(), 6.907_178_885_383_853, epsilon = 1e-12);
    }

    #[test]
    fn ln_beta_identities() {
        assert_abs_diff_eq!(ln_beta(1.0, 1.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_beta(0.5, 0.5).unwrap(), std::f64::consts::PI.ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(ln_beta(2.0, 3.0).unwrap(), (1.0f64 / 12.0).ln(), epsilon = 1e-13);
    }

    #[test]
    fn incomplete_beta_reference_values() {
        // mpmath betainc(regularized=True)
        let cases = [
            (2.5, 0.5, 0.3, 0.018_927_124_071_945_65),
            (0.5, 3.0, 1e-9, 5.929_270_608_862_864e-5),
            (10.0, 20.0, 0.4, 0.785_318_389_762_826_2),
        ];
        for (a, b, x, expected) in cases {
            let got = beta_reg(a, b, x, 1.0 - x);
            assert!((got - expected).abs() <= 1e-13 * expected, "I_{x}({a},{b}) = {got}");
        }
        assert_eq!(beta_reg(2.0, 3.0, 0.0, 1.0), 0.0);
        assert_eq!(beta_reg(2.0, 3.0, 1.0, 0.0), 1.0);
        // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
        let lhs = beta_reg(3.5, 1.5, 0.62, 0.38);
        let rhs = 1.0 - beta_reg(1.5, 3.5, 0.38, 0.62);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-15);
    }

    #[test]
    fn nonpositive_arguments_are_domain_errors() {
        for x in [0.0, -1.0, -0.5, f64::NAN, f64::NEG_INFINITY] {
            assert!(matches!(digamma(x), Err(Error::Domain { .. })));
            assert!(matches!(ln_gamma(x), Err(Error::Domain { .. })));
        }
        assert!(ln_beta(1.0, 0.0).is_err());
        assert!(ln_beta(-2.0, 1.0).is_err());
    }

    #[test]
    fn digamma_matches_central_difference_of_ln_gamma() {
        let h = 1e-5;
        for &x in &[0.3, 0.9, 1.7, 4.2, 12.5, 77.0] {
            let fd = (ln_gamma(x + h).unwrap() - ln_gamma(x - h).unwrap()) / (2.0 * h);
            // truncation O(h²)·ψ''/6 plus rounding ~ 1e-16 / h
            assert_abs_diff_eq!(fd, digamma(x).unwrap(), epsilon = 1e-8);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn digamma_recurrence(x in 1e-3f64..=100.0) {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            prop_assert!((lhs - 1.0 / x).abs() <= 1e-12);
        }

        #[test]
        fn ln_gamma_recurrence(x in 1e-3f64..=100.0) {
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = ln_gamma(x).unwrap() + x.ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
}
