//! Bandwidth choice for the kernel quantile density: the asymptotic MSE
//! plug-in rule from analytic `q` and `q''`, and a Monte-Carlo grid search
//! on the MSE of the entropy estimate.

use std::str::FromStr;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::kernel::{entropy_hat, KernelConfig, KernelKind};
use crate::rng::replicate;

/// Probability levels summarised by [`median_amse_h`].
pub const SUMMARY_LEVELS: [f64; 7] = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];

/// Pointwise AMSE-optimal bandwidth for the quantile density of `d` at `t`
/// with the Gaussian kernel.
pub fn amse_optimal_h(d: &Distribution, t: f64, n: usize) -> Result<f64> {
    amse_optimal_h_with(d, t, n, KernelKind::Gaussian)
}

pub fn amse_optimal_h_with(d: &Distribution, t: f64, n: usize, kernel: KernelKind) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let q = d.qdf(t)?;
    let q2 = d.qdf_second_derivative(t)?;
    if !q2.is_finite() || q2.abs() <= 1e-12 * q.abs() {
        return Err(Error::SingularCurvature { t });
    }
    let mu2 = kernel.second_moment();
    let ratio = q * q * kernel.roughness() / (n as f64 * q2 * q2 * mu2 * mu2);
    Ok(ratio.powf(0.2))
}

/// Median of the pointwise AMSE bandwidths over [`SUMMARY_LEVELS`].
pub fn median_amse_h(d: &Distribution, n: usize) -> Result<f64> {
    let mut hs = SUMMARY_LEVELS
        .iter()
        .map(|&t| amse_optimal_h(d, t, n))
        .collect::<Result<Vec<f64>>>()?;
    hs.sort_by(f64::total_cmp);
    Ok(hs[hs.len() / 2])
}

/// Normal-reference bandwidth: the AMSE summary for a normal law, which
/// does not depend on its location or scale.
pub fn normal_reference_h(n: usize) -> Result<f64> {
    median_amse_h(&Distribution::standard_normal(), n)
}

/// Strictly increasing positive candidate bandwidths.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthGrid {
    values: Vec<f64>,
}

impl BandwidthGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("bandwidth grid is empty".into()));
        }
        if let Some(bad) = values.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return Err(Error::domain("bandwidth candidate", *bad));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "bandwidth grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { values })
    }

    /// `count` log-spaced points from `min` to `max` inclusive.
    pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Self> {
        if count == 0 || !(min > 0.0) || !(max >= min) {
            return Err(Error::InvalidParameter(format!(
                "invalid grid {min}:{max}:{count}"
            )));
        }
        if count == 1 {
            return Self::new(vec![min]);
        }
        let (lo, hi) = (min.ln(), max.ln());
        Self::new(
            (0..count)
                .map(|k| (lo + (hi - lo) * k as f64 / (count - 1) as f64).exp())
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Default for BandwidthGrid {
    /// 40 log-spaced points in [1e-3, 1].
    fn default() -> Self {
        Self::log_spaced(1e-3, 1.0, 40).expect("static grid is valid")
    }
}

impl FromStr for BandwidthGrid {
    type Err = Error;

    /// Parses `min:max:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid `{s}` is not min:max:count")));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{v}: {e}")));
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("{count}: {e}")))?;
        Self::log_spaced(num(min)?, num(max)?, count)
    }
}

/// One candidate of a grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub h: f64,
    /// MSE over the replications where the estimate exists.
    pub mse: f64,
    pub failures: usize,
    /// More than 1% of replications failed.
    pub disqualified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSearch {
    pub h_star: f64,
    pub curve: Vec<GridPoint>,
}

/// Monte-Carlo MSE of the kernel entropy estimate for every candidate in
/// `grid`, with replication `r` drawn from stream `r` of `seed` and shared
/// by all candidates.
pub fn grid_search_h(
    d: &Distribution,
    n: usize,
    template: &KernelConfig,
    grid: &BandwidthGrid,
    reps: usize,
    seed: u64,
) -> Result<BandwidthSearch> {
    if reps < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 replications, got {reps}")));
    }
    template.validate()?;
    let truth = d.true_entropy();
    let configs: Vec<KernelConfig> = grid
        .values()
        .iter()
        .map(|&h| KernelConfig { h, ..*template })
        .collect();
    let runs = replicate(seed, reps, |_, rng| -> Result<Vec<Option<f64>>> {
        let x = d.sample(n, rng)?;
        configs
            .iter()
            .map(|cfg| match entropy_hat(&x, cfg) {
                Ok(e) => Ok(Some(e.value)),
                Err(e) if e.is_numeric() => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let mut curve = Vec::with_capacity(configs.len());
    for (j, cfg) in configs.iter().enumerate() {
        let (mut sum, mut ok) = (0.0, 0usize);
        for run in &runs {
            if let Some(v) = run[j] {
                sum += (v - truth) * (v - truth);
                ok += 1;
            }
        }
        let failures = reps - ok;
        curve.push(GridPoint {
            h: cfg.h,
            mse: if ok > 0 { sum / ok as f64 } else { f64::NAN },
            failures,
            disqualified: 100 * failures > reps,
        });
    }
    let best = curve
        .iter()
        .filter(|p| !p.disqualified)
        .min_by(|a, b| a.mse.total_cmp(&b.mse))
        .ok_or(Error::NoViableBandwidth)?;
    Ok(BandwidthSearch {
        h_star: best.h,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_has_no_curvature() {
        for t in [0.1, 0.5, 0.9] {
            assert!(matches!(
                amse_optimal_h(&Distribution::Uniform01, t, 50),
                Err(Error::SingularCurvature { .. })
            ));
        }
    }

    #[test]
    fn exponential_reference_value() {
        let d = Distribution::exponential(1.0).unwrap();
        // q = 2, q'' = 16 at t = 1/2
        let expected = (4.0 * 0.282_094_79 / (50.0 * 256.0f64)).powf(0.2);
        assert_abs_diff_eq!(expected, 0.15456, epsilon = 1e-4);
        assert_abs_diff_eq!(amse_optimal_h(&d, 0.5, 50).unwrap(), expected, epsilon = 1e-8);
    }

    #[test]
    fn scale_free() {
        for t in [0.2, 0.5, 0.77] {
            let a = amse_optimal_h(&Distribution::standard_normal(), t, 50).unwrap();
            let b = amse_optimal_h(&Distribution::normal(3.0, 7.5).unwrap(), t, 50).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a);
            let e1 = amse_optimal_h(&Distribution::exponential(1.0).unwrap(), t, 20).unwrap();
            let e4 = amse_optimal_h(&Distribution::exponential(0.25).unwrap(), t, 20).unwrap();
            assert_abs_diff_eq!(e1, e4, epsilon = 1e-12 * e1);
        }
    }

    #[test]
    fn shrinks_at_the_fifth_root_rate() {
        let ratio = normal_reference_h(50).unwrap() / normal_reference_h(1600).unwrap();
        assert_abs_diff_eq!(ratio, 32f64.powf(0.2), epsilon = 1e-12);
    }

    #[test]
    fn grid_construction() {
        let g = BandwidthGrid::default();
        assert_eq!(g.values().len(), 40);
        assert_abs_diff_eq!(g.values()[0], 1e-3, epsilon = 1e-15);
        assert_abs_diff_eq!(g.values()[39], 1.0, epsilon = 1e-12);
        let parsed: BandwidthGrid = "0.01:0.1:3".parse().unwrap();
        assert_abs_diff_eq!(parsed.values()[1], 0.1f64.sqrt() * 0.1, epsilon = 1e-12);
        assert!("0.1:0.01:3".parse::<BandwidthGrid>().is_err());
        assert!("0.1:1".parse::<BandwidthGrid>().is_err());
        assert!(BandwidthGrid::new(vec![0.2, 0.1]).is_err());
        assert!(BandwidthGrid::new(vec![]).is_err());
    }

    #[test]
    fn single_candidate_and_determinism() {
        let d = Distribution::standard_normal();
        let template = KernelConfig::new(0.1).unwrap();
        let grid = BandwidthGrid::new(vec![0.081]).unwrap();
        let r = grid_search_h(&d, 20, &template, &grid, 20, 1).unwrap();
        assert_eq!(r.h_star, 0.081);

        let grid = BandwidthGrid::log_spaced(0.02, 0.5, 6).unwrap();
        let a = grid_search_h(&d, 20, &template, &grid, 30, 9).unwrap();
        let b = grid_search_h(&d, 20, &template, &grid, 30, 9).unwrap();
        assert_eq!(a, b);
        let min = a
            .curve
            .iter()
            .filter(|p| !p.disqualified)
            .map(|p| p.mse)
            .fold(f64::INFINITY, f64::min);
        assert!(a.curve.iter().all(|p| p.disqualified || p.mse >= 0.0));
        assert_eq!(a.curve.iter().find(|p| p.h == a.h_star).unwrap().mse, min);
    }

    #[test]
    fn failing_candidates_are_disqualified() {
        let d = Distribution::standard_normal();
        let mut template = KernelConfig::new(0.1).unwrap();
        template.quadrature.node_budget = 129;
        // an impossible tolerance makes every estimate fail
        template.quadrature.tolerance = 1e-300;
        let grid = BandwidthGrid::new(vec![0.05, 0.1]).unwrap();
        assert_eq!(
            grid_search_h(&d, 20, &template, &grid, 10, 3),
            Err(Error::NoViableBandwidth)
        );
        assert!(grid_search_h(&d, 20, &template, &grid, 1, 3).is_err());
    }
}
