//! Kernel-smoothed quantile density and the trimmed entropy estimator
//! built on it.
//!
//! With `K` the Gaussian kernel and `h` the bandwidth,
//!
//! ```text
//! q(t) = h^-1 sum_{i<n} K((t - i/n)/h) (X(i+1) - X(i))
//!      + h^-1 [K((t - 1)/h) X(n) - K(t/h) X(1)]
//! ```
//!
//! and the entropy estimate is
//! `eps ln q(eps) + eps ln q(1 - eps) + int_{eps}^{1-eps} ln q(t) dt`.
//!
//! The closed form is linear in the data, so it scales exactly but the
//! boundary term picks up a shift `b` as `b h^-1 [K((t-1)/h) - K(t/h)]`.

use serde::{Deserialize, Serialize};

use crate::dist::standard_normal_pdf;
use crate::error::{Error, Result};
use crate::estimate::{EntropyEstimate, EstimatorId, Tuning};
use crate::quad::{simpson, QuadratureConfig};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    #[default]
    Gaussian,
}

impl KernelKind {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            KernelKind::Gaussian => standard_normal_pdf(u),
        }
    }

    /// Integral of K squared.
    pub fn roughness(self) -> f64 {
        match self {
            KernelKind::Gaussian => 0.5 / std::f64::consts::PI.sqrt(),
        }
    }

    /// Second moment of K.
    pub fn second_moment(self) -> f64 {
        match self {
            KernelKind::Gaussian => 1.0,
        }
    }
}

pub const DEFAULT_EPS: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    #[serde(default)]
    pub kernel: KernelKind,
    pub h: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

impl KernelConfig {
    pub fn new(h: f64) -> Result<Self> {
        let cfg = Self {
            kernel: KernelKind::Gaussian,
            h,
            eps: DEFAULT_EPS,
            quadrature: QuadratureConfig::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        self.eps = eps;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::domain("bandwidth h", self.h));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::domain("trimming level eps", self.eps));
        }
        self.quadrature.validate()
    }
}

/// Empirical quantile `Q_n(t) = X(k)` with `k = ceil(t n)`.
pub fn empirical_quantile(x: &Sample, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain("probability t", t));
    }
    let n = x.len();
    let k = ((t * n as f64).ceil() as usize).clamp(1, n);
    Ok(x.sorted()[k - 1])
}

/// Interior part of the estimate: kernel-weighted spacings only.
pub fn qdf_bar(x: &Sample, t: f64, kernel: KernelKind, h: f64) -> f64 {
    let s = x.sorted();
    let n = s.len() as f64;
    let sum: f64 = s
        .windows(2)
        .enumerate()
        .map(|(i, w)| kernel.eval((t - (i + 1) as f64 / n) / h) * (w[1] - w[0]))
        .sum();
    sum / h
}

/// Quantile density estimate at `t`. The value may be non-positive.
pub fn qdf_hat(x: &Sample, t: f64, kernel: KernelKind, h: f64) -> f64 {
    let s = x.sorted();
    let boundary = kernel.eval((t - 1.0) / h) * s[s.len() - 1] - kernel.eval(t / h) * s[0];
    qdf_bar(x, t, kernel, h) + boundary / h
}

fn ln_qdf(x: &Sample, t: f64, cfg: &KernelConfig) -> Result<f64> {
    let value = qdf_hat(x, t, cfg.kernel, cfg.h);
    if value > 0.0 {
        Ok(value.ln())
    } else {
        Err(Error::NonPositiveQdf { t, value })
    }
}

/// Trimmed entropy estimate from the kernel quantile density.
pub fn entropy_hat(x: &Sample, cfg: &KernelConfig) -> Result<EntropyEstimate> {
    cfg.validate()?;
    let eps = cfg.eps;
    let ends = eps * (ln_qdf(x, eps, cfg)? + ln_qdf(x, 1.0 - eps, cfg)?);
    let body = simpson(|t| ln_qdf(x, t, cfg), eps, 1.0 - eps, &cfg.quadrature)?;
    Ok(EntropyEstimate {
        value: ends + body.value,
        estimator: EstimatorId::Kernel,
        n: x.len(),
        tuning: Tuning::Kernel(*cfg),
    })
}

/// The estimate tabulated on a uniform grid over `[eps, 1 - eps]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QdfCurve {
    pub t: Vec<f64>,
    pub q: Vec<f64>,
}

impl QdfCurve {
    pub fn evaluate(x: &Sample, cfg: &KernelConfig, points: usize) -> Result<Self> {
        cfg.validate()?;
        if points < 2 {
            return Err(Error::InvalidParameter(format!(
                "a curve needs at least 2 points, got {points}"
            )));
        }
        let (a, b) = (cfg.eps, 1.0 - cfg.eps);
        let t: Vec<f64> = (0..points)
            .map(|k| a + (b - a) * k as f64 / (points - 1) as f64)
            .collect();
        let mut q = Vec::with_capacity(points);
        for &ti in &t {
            let value = qdf_hat(x, ti, cfg.kernel, cfg.h);
            if !(value > 0.0) {
                return Err(Error::NonPositiveQdf { t: ti, value });
            }
            q.push(value);
        }
        Ok(Self { t, q })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{standard_normal_cdf, Distribution};
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const K: KernelKind = KernelKind::Gaussian;

    fn normal_sample(n: usize, stream: u64) -> Sample {
        Distribution::standard_normal()
            .sample(n, &mut RngStream::new(2024, stream))
            .unwrap()
    }

    #[test]
    fn empirical_quantile_cells() {
        let x = Sample::new(vec![4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(empirical_quantile(&x, 0.5).unwrap(), 2.0);
        assert_eq!(empirical_quantile(&x, 0.51).unwrap(), 3.0);
        assert_eq!(empirical_quantile(&x, 1.0).unwrap(), 4.0);
        assert_eq!(empirical_quantile(&x, 1e-9).unwrap(), 1.0);
        assert!(empirical_quantile(&x, 0.0).is_err());
        assert!(empirical_quantile(&x, 1.2).is_err());
    }

    #[test]
    fn closed_form_hand_value() {
        let x = Sample::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let k0 = 0.398_942_3;
        let k25 = 0.017_528_3;
        let expected = 10.0 * (k25 + k0 + k25);
        assert_abs_diff_eq!(qdf_hat(&x, 0.5, K, 0.1), expected, epsilon = 5e-4);
        assert_abs_diff_eq!(qdf_hat(&x, 0.5, K, 0.1), qdf_bar(&x, 0.5, K, 0.1), epsilon = 1e-4);
    }

    /// Convolution of the empirical quantile with the kernel, integrated
    /// cell by cell: each cell of Q_n is constant so the kernel integral is
    /// a difference of normal cdfs.
    fn smoothed_quantile(x: &Sample, t: f64, h: f64) -> f64 {
        let n = x.len() as f64;
        x.sorted()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let (lo, hi) = (k as f64 / n, (k + 1) as f64 / n);
                v * (standard_normal_cdf((t - lo) / h) - standard_normal_cdf((t - hi) / h))
            })
            .sum()
    }

    #[test]
    fn matches_finite_difference_of_smoothed_quantile() {
        let x = normal_sample(50, 0);
        let h = 0.03;
        let delta = 1e-6;
        for t in [0.3, 0.45, 0.5, 0.62, 0.7] {
            let fd = (smoothed_quantile(&x, t + delta, h) - smoothed_quantile(&x, t - delta, h))
                / (2.0 * delta);
            let q = qdf_hat(&x, t, K, h);
            assert!(((fd - q) / q).abs() < 1e-4, "t = {t}: fd {fd} vs {q}");
        }
    }

    #[test]
    fn shift_moves_only_the_boundary_term() {
        let x = normal_sample(30, 1);
        let b = 2.5;
        let y = x.affine(1.0, b).unwrap();
        let h = 0.08;
        for t in [0.01, 0.2, 0.5, 0.93] {
            let expected = b / h * (K.eval((t - 1.0) / h) - K.eval(t / h));
            let got = qdf_hat(&y, t, K, h) - qdf_hat(&x, t, K, h);
            assert_abs_diff_eq!(got, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn entropy_is_nearly_shift_invariant_when_boundary_kernel_vanishes() {
        let x = normal_sample(200, 2);
        let cfg = KernelConfig::new(0.008).unwrap().with_eps(0.05).unwrap();
        let b = 3.0;
        let a = entropy_hat(&x, &cfg).unwrap().value;
        let shifted = entropy_hat(&x.affine(1.0, b).unwrap(), &cfg).unwrap().value;
        // per-node change of q is at most b h^-1 K(eps/h); q itself is at least ~1 here
        let bound = b * K.eval(cfg.eps / cfg.h) / cfg.h;
        assert!(bound < 1e-6, "bound {bound}");
        assert!((a - shifted).abs() <= bound, "{a} vs {shifted}, bound {bound}");
    }

    #[test]
    fn interior_part_is_nonnegative() {
        let x = normal_sample(40, 3);
        for k in 0..=100 {
            assert!(qdf_bar(&x, k as f64 / 100.0, K, 0.05) >= 0.0);
        }
    }

    #[test]
    fn interior_mass_recovers_range_for_small_bandwidth() {
        let x = normal_sample(1000, 4);
        let h = 1e-3;
        let cfg = QuadratureConfig {
            initial_nodes: 20_001,
            node_budget: 40_001,
            tolerance: 1e-3,
        };
        let mass = simpson(|t| Ok(qdf_bar(&x, t, K, h)), 0.0, 1.0, &cfg).unwrap().value;
        let range = x.sorted()[999] - x.sorted()[0];
        assert!((mass / range - 1.0).abs() < 0.05, "mass {mass} range {range}");
    }

    #[test]
    fn constant_sample_has_non_positive_qdf() {
        let x = Sample::new(vec![1.5; 12]).unwrap();
        let cfg = KernelConfig::new(0.1).unwrap();
        assert!(matches!(entropy_hat(&x, &cfg), Err(Error::NonPositiveQdf { .. })));
        assert!(QdfCurve::evaluate(&x, &cfg, 10).is_err());
    }

    #[test]
    fn refinement_is_self_consistent() {
        let x = normal_sample(50, 5);
        let cfg = KernelConfig::new(0.0333).unwrap();
        let base = entropy_hat(&x, &cfg).unwrap().value;
        let mut fine = cfg;
        fine.quadrature = QuadratureConfig {
            initial_nodes: 2 * cfg.quadrature.initial_nodes - 1,
            node_budget: 2 * cfg.quadrature.node_budget - 1,
            tolerance: 1e-10,
        };
        let refined = entropy_hat(&x, &fine).unwrap().value;
        assert!((base - refined).abs() < 1e-6, "{base} vs {refined}");
    }

    #[test]
    fn estimate_is_tagged() {
        let x = normal_sample(20, 6);
        let cfg = KernelConfig::new(0.081).unwrap();
        let e = entropy_hat(&x, &cfg).unwrap();
        assert_eq!(e.estimator, EstimatorId::Kernel);
        assert_eq!(e.n, 20);
        assert_eq!(e.tuning, Tuning::Kernel(cfg));
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::new(0.0).is_err());
        assert!(KernelConfig::new(f64::NAN).is_err());
        assert!(KernelConfig::new(0.1).unwrap().with_eps(0.5).is_err());
        assert!(KernelConfig::new(0.1).unwrap().with_eps(0.0).is_err());
    }

    #[test]
    fn curve_is_positive_on_trimmed_grid() {
        let x = normal_sample(50, 7);
        let cfg = KernelConfig::new(0.0333).unwrap();
        let c = QdfCurve::evaluate(&x, &cfg, 21).unwrap();
        assert_eq!(c.t.len(), 21);
        assert_abs_diff_eq!(c.t[0], 0.01);
        assert_abs_diff_eq!(c.t[20], 0.99, epsilon = 1e-15);
        assert!(c.q.iter().all(|q| *q > 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn qdf_scales_linearly(seed in 0u64..1000, a in 0.01f64..100.0, t in 0.0f64..1.0) {
            let x = normal_sample(25, seed);
            let y = x.affine(a, 0.0).unwrap();
            let (qx, qy) = (qdf_hat(&x, t, K, 0.07), qdf_hat(&y, t, K, 0.07));
            prop_assert!((qy - a * qx).abs() <= 1e-12 * (a * qx).abs().max(1.0));
        }

        #[test]
        fn entropy_scale_equivariance(seed in 0u64..1000, a in 0.01f64..100.0) {
            let x = normal_sample(30, seed);
            let cfg = KernelConfig::new(0.05).unwrap();
            if let Ok(ex) = entropy_hat(&x, &cfg) {
                let ey = entropy_hat(&x.affine(a, 0.0).unwrap(), &cfg).unwrap();
                prop_assert!((ey.value - ex.value - a.ln()).abs() < 1e-10);
            }
        }
    }
}
