//! Location-scale entropy functionals in the style of Parzen (experimental).
//!
//! Under a null family `F(x) = F0((x - mu)/sigma)` the density-quantile
//! `f0(Q0(t)) q(t) / sigma` is identically one, so the entropy of the
//! uniformized variable is zero. Both estimators below plug a data-based
//! quantile density into
//!
//! ```text
//! d(t) = g(t) q(t) / s,   g = f0 o Q0,   s = trimmed integral of g q
//! ```
//!
//! and return the trimmed integral of `ln d`, with the same `eps` endpoint
//! terms as the kernel entropy estimate. The star variant uses the kernel
//! quantile density; the tilde variant uses the slope of the piecewise
//! linear sample quantile.

use serde::{Deserialize, Serialize};

use crate::dist::{standard_normal_cdf, standard_normal_pdf, standard_normal_quantile};
use crate::error::{Error, Result};
use crate::estimate::{EntropyEstimate, EstimatorId, Tuning};
use crate::kernel::{qdf_hat, KernelConfig};
use crate::quad::simpson;
use crate::sample::Sample;

/// Standardized null shape `F0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullShape {
    #[default]
    Normal,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LocationScaleNull {
    pub shape: NullShape,
}

impl LocationScaleNull {
    pub fn normal() -> Self {
        Self {
            shape: NullShape::Normal,
        }
    }

    pub fn uniform() -> Self {
        Self {
            shape: NullShape::Uniform,
        }
    }

    /// `g(t) = f0(Q0(t))`.
    pub fn density_quantile(&self, t: f64) -> f64 {
        match self.shape {
            NullShape::Normal => standard_normal_pdf(standard_normal_quantile(t)),
            NullShape::Uniform => 1.0,
        }
    }

    /// Integral of `g` over `[a, b]`.
    pub fn integral_g(&self, a: f64, b: f64) -> f64 {
        match self.shape {
            NullShape::Normal => {
                let s = std::f64::consts::SQRT_2;
                let (za, zb) = (standard_normal_quantile(a), standard_normal_quantile(b));
                (standard_normal_cdf(s * zb) - standard_normal_cdf(s * za))
                    / (2.0 * std::f64::consts::PI.sqrt())
            }
            NullShape::Uniform => b - a,
        }
    }

    /// Integral of `ln g` over `[a, b]`.
    pub fn integral_ln_g(&self, a: f64, b: f64) -> f64 {
        match self.shape {
            NullShape::Normal => {
                let (za, zb) = (standard_normal_quantile(a), standard_normal_quantile(b));
                // int z(t)^2 dt = [Phi(z) - z phi(z)]
                let second = |z: f64| standard_normal_cdf(z) - z * standard_normal_pdf(z);
                -0.5 * (2.0 * std::f64::consts::PI).ln() * (b - a) - 0.5 * (second(zb) - second(za))
            }
            NullShape::Uniform => 0.0,
        }
    }

    /// Trimmed log-integral of `g` including the `eps` endpoint terms.
    fn trimmed_ln_g(&self, eps: f64) -> f64 {
        eps * (self.density_quantile(eps).ln() + self.density_quantile(1.0 - eps).ln())
            + self.integral_ln_g(eps, 1.0 - eps)
    }
}

/// Value of `X(0)` used by the first cell of the sample quantile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FirstCell {
    /// `X(0) = X(1)`: the first cell is flat.
    #[default]
    Repeat,
    /// `X(0) = 2 X(1) - X(2)`: the first spacing is repeated below `X(1)`.
    Extrapolate,
}

fn lower_point(x: &Sample, first: FirstCell) -> f64 {
    let s = x.sorted();
    match first {
        FirstCell::Repeat => s[0],
        FirstCell::Extrapolate => 2.0 * s[0] - s[1],
    }
}

/// Piecewise-linear sample quantile through `(i/n, X(i))`, `i = 0..=n`.
pub fn sample_quantile_tilde(x: &Sample, t: f64) -> Result<f64> {
    sample_quantile_tilde_with(x, t, FirstCell::default())
}

pub fn sample_quantile_tilde_with(x: &Sample, t: f64, first: FirstCell) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain("probability t", t));
    }
    let s = x.sorted();
    let n = s.len();
    let nf = n as f64;
    let i = ((t * nf).ceil() as usize).clamp(1, n);
    let prev = if i == 1 { lower_point(x, first) } else { s[i - 2] };
    let frac = t * nf - (i - 1) as f64;
    if frac >= 1.0 {
        return Ok(s[i - 1]);
    }
    // n(i/n - t) X(i-1) + n(t - (i-1)/n) X(i), kept inside the cell
    Ok((prev + frac * (s[i - 1] - prev)).clamp(prev.min(s[i - 1]), s[i - 1]))
}

/// Parzen-type estimate built on the kernel quantile density.
pub fn parzen_entropy_star(
    x: &Sample,
    null: &LocationScaleNull,
    cfg: &KernelConfig,
) -> Result<EntropyEstimate> {
    cfg.validate()?;
    let eps = cfg.eps;
    let q = |t: f64| -> Result<f64> {
        let value = qdf_hat(x, t, cfg.kernel, cfg.h);
        if value > 0.0 {
            Ok(value)
        } else {
            Err(Error::NonPositiveQdf { t, value })
        }
    };
    let (q_lo, q_hi) = (q(eps)?, q(1.0 - eps)?);
    let (g_lo, g_hi) = (null.density_quantile(eps), null.density_quantile(1.0 - eps));
    let ln_q = simpson(|t| Ok(q(t)?.ln()), eps, 1.0 - eps, &cfg.quadrature)?.value;
    // integrate in units of the sample range so the stopping rule is scale free
    let range = x.sorted()[x.len() - 1] - x.sorted()[0];
    if !(range > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let gq = range
        * simpson(
            |t| Ok(null.density_quantile(t) * q(t)? / range),
            eps,
            1.0 - eps,
            &cfg.quadrature,
        )?
        .value;
    let sigma = eps * (g_lo * q_lo + g_hi * q_hi) + gq;
    let h_q = eps * (q_lo.ln() + q_hi.ln()) + ln_q;
    Ok(EntropyEstimate {
        value: null.trimmed_ln_g(eps) + h_q - sigma.ln(),
        estimator: EstimatorId::ParzenStar,
        n: x.len(),
        tuning: Tuning::Kernel(*cfg),
    })
}

/// Parzen-type estimate built on the slope of the piecewise-linear sample
/// quantile, integrated exactly cell by cell over `[eps, 1 - eps]`.
pub fn parzen_entropy_tilde(
    x: &Sample,
    null: &LocationScaleNull,
    eps: f64,
) -> Result<EntropyEstimate> {
    parzen_entropy_tilde_with(x, null, eps, FirstCell::default())
}

pub fn parzen_entropy_tilde_with(
    x: &Sample,
    null: &LocationScaleNull,
    eps: f64,
    first: FirstCell,
) -> Result<EntropyEstimate> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::domain("trimming level eps", eps));
    }
    let s = x.sorted();
    let n = s.len();
    let nf = n as f64;
    // slope of cell i, i.e. on ((i-1)/n, i/n]
    let slope = |i: usize| {
        let prev = if i == 1 { lower_point(x, first) } else { s[i - 2] };
        nf * (s[i - 1] - prev)
    };
    let (a, b) = (eps, 1.0 - eps);
    // endpoint slopes come from the cells just inside [a, b]
    let lo_cell = ((a * nf).floor() as usize + 1).min(n);
    let hi_cell = ((b * nf).ceil() as usize).clamp(1, n);

    let (mut ln_q, mut gq) = (0.0, 0.0);
    for i in lo_cell..=hi_cell {
        let left = ((i - 1) as f64 / nf).max(a);
        let right = (i as f64 / nf).min(b);
        if right <= left {
            continue;
        }
        let q = slope(i);
        if !(q > 0.0) {
            return Err(Error::DegenerateSpacings { index: i });
        }
        ln_q += q.ln() * (right - left);
        gq += q * null.integral_g(left, right);
    }
    let (q_lo, q_hi) = (slope(lo_cell), slope(hi_cell));
    let sigma = eps * (null.density_quantile(a) * q_lo + null.density_quantile(b) * q_hi) + gq;
    let h_q = eps * (q_lo.ln() + q_hi.ln()) + ln_q;
    Ok(EntropyEstimate {
        value: null.trimmed_ln_g(eps) + h_q - sigma.ln(),
        estimator: EstimatorId::ParzenTilde,
        n,
        tuning: Tuning::Trim { eps },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;
    use crate::kernel::entropy_hat;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn normal(n: usize, stream: u64) -> Sample {
        Distribution::standard_normal()
            .sample(n, &mut RngStream::new(31, stream))
            .unwrap()
    }

    /// Bandwidth shrinking like n^-1/2 from the n = 50 value, with room
    /// for the extra quadrature nodes a narrow kernel needs.
    fn large_sample_config(n: usize) -> KernelConfig {
        let mut cfg = KernelConfig::new(0.0333 * (50.0 / n as f64).sqrt()).unwrap();
        cfg.quadrature.node_budget = 16_385;
        cfg
    }

    #[test]
    fn tilde_quantile_interpolates() {
        let x = Sample::new(vec![4.0, 1.0, 9.0, 2.0]).unwrap();
        assert_eq!(sample_quantile_tilde(&x, 0.5).unwrap(), 2.0);
        assert_eq!(sample_quantile_tilde(&x, 1.0).unwrap(), 9.0);
        assert_abs_diff_eq!(sample_quantile_tilde(&x, 0.875).unwrap(), 6.5, epsilon = 1e-12);
        assert_eq!(sample_quantile_tilde(&x, 0.1).unwrap(), 1.0);
        let e = sample_quantile_tilde_with(&x, 0.125, FirstCell::Extrapolate).unwrap();
        assert_abs_diff_eq!(e, 0.5, epsilon = 1e-12);
        assert!(sample_quantile_tilde(&x, 0.0).is_err());
    }

    #[test]
    fn tilde_quantile_is_monotone() {
        let x = normal(37, 0);
        let mut rng = RngStream::new(8, 8);
        let mut ts: Vec<f64> = (0..1000).map(|_| rng.uniform()).collect();
        ts.sort_by(f64::total_cmp);
        let qs: Vec<f64> = ts.iter().map(|t| sample_quantile_tilde(&x, *t).unwrap()).collect();
        assert!(qs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn normal_closed_forms_match_quadrature() {
        let null = LocationScaleNull::normal();
        let cfg = crate::quad::QuadratureConfig {
            tolerance: 1e-12,
            node_budget: 1 << 16 | 1,
            ..Default::default()
        };
        let (a, b) = (0.01, 0.7);
        let g = simpson(|t| Ok(null.density_quantile(t)), a, b, &cfg).unwrap().value;
        assert_abs_diff_eq!(null.integral_g(a, b), g, epsilon = 1e-10);
        let lg = simpson(|t| Ok(null.density_quantile(t).ln()), a, b, &cfg).unwrap().value;
        assert_abs_diff_eq!(null.integral_ln_g(a, b), lg, epsilon = 1e-10);
    }

    #[test]
    fn uniform_null_reduces_to_normalized_kernel_entropy() {
        let x = normal(60, 1);
        let cfg = KernelConfig::new(0.04).unwrap();
        let star = parzen_entropy_star(&x, &LocationScaleNull::uniform(), &cfg).unwrap().value;
        let h = entropy_hat(&x, &cfg).unwrap().value;
        let mass = cfg.eps * (qdf_hat(&x, cfg.eps, cfg.kernel, cfg.h) + qdf_hat(&x, 1.0 - cfg.eps, cfg.kernel, cfg.h))
            + simpson(|t| Ok(qdf_hat(&x, t, cfg.kernel, cfg.h)), cfg.eps, 1.0 - cfg.eps, &cfg.quadrature)
                .unwrap()
                .value;
        assert_abs_diff_eq!(star, h - mass.ln(), epsilon = 1e-9);
    }

    #[test]
    fn tilde_hand_value_for_equal_spacings() {
        let x = Sample::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let e = parzen_entropy_tilde_with(&x, &LocationScaleNull::uniform(), 0.01, FirstCell::Extrapolate)
            .unwrap();
        assert_abs_diff_eq!(e.value, 0.0, epsilon = 1e-14);
        assert!(matches!(
            parzen_entropy_tilde(&x, &LocationScaleNull::uniform(), 0.01),
            Err(Error::DegenerateSpacings { index: 1 })
        ));
    }

    #[test]
    fn star_is_scale_invariant() {
        let x = normal(80, 2);
        let cfg = KernelConfig::new(0.03).unwrap();
        let null = LocationScaleNull::normal();
        let base = parzen_entropy_star(&x, &null, &cfg).unwrap().value;
        for a in [0.01, 3.0, 250.0] {
            let v = parzen_entropy_star(&x.affine(a, 0.0).unwrap(), &null, &cfg).unwrap().value;
            assert_abs_diff_eq!(v, base, epsilon = 1e-10);
        }
    }

    #[test]
    fn density_quantile_integrates_to_one() {
        let x = normal(1000, 3);
        let cfg = large_sample_config(1000);
        let null = LocationScaleNull::normal();
        let q = |t: f64| qdf_hat(&x, t, cfg.kernel, cfg.h);
        let (a, b) = (cfg.eps, 1.0 - cfg.eps);
        let sigma = cfg.eps * (null.density_quantile(a) * q(a) + null.density_quantile(b) * q(b))
            + simpson(|t| Ok(null.density_quantile(t) * q(t)), a, b, &cfg.quadrature)
                .unwrap()
                .value;
        // trapezoid rule on a fine independent grid
        let m = 20_000;
        let step = (b - a) / m as f64;
        let d = |t: f64| null.density_quantile(t) * q(t) / sigma;
        let body: f64 = (0..m)
            .map(|k| 0.5 * step * (d(a + k as f64 * step) + d(a + (k + 1) as f64 * step)))
            .sum();
        let total = cfg.eps * (d(a) + d(b)) + body;
        assert!((total - 1.0).abs() < 0.02, "total {total}");
    }

    #[test]
    fn both_variants_vanish_under_normal_null() {
        let n = 1000;
        let cfg = large_sample_config(n);
        let null = LocationScaleNull::normal();
        let mut star = Vec::new();
        let mut tilde = Vec::new();
        for r in 0..100 {
            let x = normal(n, 100 + r);
            star.push(parzen_entropy_star(&x, &null, &cfg).unwrap().value.abs());
            let t = parzen_entropy_tilde(&x, &null, cfg.eps).unwrap().value;
            assert!(t < 0.0);
            tilde.push(t.abs());
        }
        let median = |v: &mut Vec<f64>| {
            v.sort_by(f64::total_cmp);
            0.5 * (v[49] + v[50])
        };
        let star_median = median(&mut star);
        assert!(star_median < 0.05, "median |H*| = {star_median}");
        // raw slopes n (X(i) - X(i-1)) are close to exponential, and the mean
        // log of an exponential sits Euler's constant below the log mean
        let tilde_median = median(&mut tilde);
        assert!(
            (tilde_median - crate::special::EULER_GAMMA).abs() < 0.05,
            "median |H~| = {tilde_median}"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tilde_is_affine_invariant(seed in 0u64..10_000, k in -4i32..7, b in -50i32..50) {
            // data on a 2^-30 grid with a power-of-two scale and an integer
            // shift, so the transformed sample is exact
            let grid = 2f64.powi(30);
            let x = Sample::new(
                normal(150, seed).values().iter().map(|v| (v * grid).round() / grid).collect(),
            )
            .unwrap();
            let null = LocationScaleNull::normal();
            let base = parzen_entropy_tilde(&x, &null, 0.01).unwrap().value;
            let y = x.affine(2f64.powi(k), f64::from(b)).unwrap();
            let moved = parzen_entropy_tilde(&y, &null, 0.01).unwrap().value;
            prop_assert!((moved - base).abs() < 1e-12, "{} vs {}", moved, base);
        }
    }
}
