//! Entropy estimators built from spacings of the order statistics.
//!
//! Every estimator takes a window `m` with `1 <= m <= n/2` and reads order
//! statistics outside `1..=n` as the nearest extreme one. A non-positive
//! argument inside any logarithm is reported as an error instead of being
//! skipped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{EntropyEstimate, EstimatorId, Tuning};
use crate::sample::Sample;
use crate::special::digamma_unchecked;

/// Outer summation range of the Correa estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorreaRange {
    /// i = 1..n with clamped windows.
    #[default]
    Full,
    /// i = 1..n-m, still scaled by 1/n.
    Truncated,
}

/// Weight c_i used by the Ebrahimi estimator for i > n - m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EbrahimiTail {
    /// c_i = 1 + (n - i)/n.
    #[default]
    Printed,
    /// c_i = 1 + (n - i)/m, the mirror image of the lower tail.
    Symmetric,
}

/// Extrapolated upper point X(n+1) in the Yousefzadeh cdf estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperExtrapolation {
    /// X(n+1) = X(n) + n/(n-1) (X(n) - X(n-1)), which keeps the cdf monotone.
    #[default]
    Repaired,
    /// X(n+1) = X(n) - n/(n-1) (X(n) - X(n-1)); always rejected as non-monotone.
    Strict,
}

/// Window and formula variants for the spacing estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacingConfig {
    pub m: usize,
    #[serde(default)]
    pub correa_range: CorreaRange,
    #[serde(default)]
    pub ebrahimi_tail: EbrahimiTail,
    #[serde(default)]
    pub upper_extrapolation: UpperExtrapolation,
}

impl SpacingConfig {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            correa_range: CorreaRange::default(),
            ebrahimi_tail: EbrahimiTail::default(),
            upper_extrapolation: UpperExtrapolation::default(),
        }
    }

    /// Window used in the simulations: 3 for n <= 20, 4 above.
    pub fn default_window(n: usize) -> usize {
        if n <= 20 {
            3
        } else {
            4
        }
    }

    /// Evaluates the spacing estimator `id` on `x`.
    pub fn estimate(&self, id: EstimatorId, x: &Sample) -> Result<EntropyEstimate> {
        let m = self.m;
        let value = match id {
            EstimatorId::Vasicek => vasicek_value(x, m)?,
            EstimatorId::VanEs => van_es_value(x, m)?,
            EstimatorId::Correa => correa_value(x, m, self.correa_range)?,
            EstimatorId::Wieczorkowski => vasicek_value(x, m)? + wg_correction(x.len(), m),
            EstimatorId::Ebrahimi => ebrahimi_value(x, m, self.ebrahimi_tail)?,
            EstimatorId::Yousefzadeh => yousefzadeh_value(x, m, self.upper_extrapolation)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "`{other}` is not a spacing estimator"
                )))
            }
        };
        Ok(EntropyEstimate {
            value,
            estimator: id,
            n: x.len(),
            tuning: Tuning::Spacing(*self),
        })
    }
}

fn check_window(n: usize, m: usize) -> Result<()> {
    if m < 1 || 2 * m > n {
        return Err(Error::InvalidWindow { m, n });
    }
    Ok(())
}

fn ln_positive(arg: f64, index: usize) -> Result<f64> {
    if arg > 0.0 && arg.is_finite() {
        Ok(arg.ln())
    } else {
        Err(Error::DegenerateSpacings { index })
    }
}

/// Symmetric spacing X(i+m) - X(i-m) with clamped indices.
fn spacing(x: &Sample, i: usize, m: usize) -> f64 {
    let (i, m) = (i as isize, m as isize);
    x.order_stat(i + m) - x.order_stat(i - m)
}

fn vasicek_value(x: &Sample, m: usize) -> Result<f64> {
    let n = x.len();
    check_window(n, m)?;
    let scale = n as f64 / (2 * m) as f64;
    let mut sum = 0.0;
    for i in 1..=n {
        sum += ln_positive(scale * spacing(x, i, m), i)?;
    }
    Ok(sum / n as f64)
}

fn van_es_value(x: &Sample, m: usize) -> Result<f64> {
    let n = x.len();
    check_window(n, m)?;
    let s = x.sorted();
    let scale = (n + 1) as f64 / m as f64;
    let mut sum = 0.0;
    for i in 1..=n - m {
        sum += ln_positive(scale * (s[i + m - 1] - s[i - 1]), i)?;
    }
    let harmonic: f64 = (m..=n).map(|k| 1.0 / k as f64).sum();
    Ok(sum / (n - m) as f64 + harmonic + (m as f64).ln() - ((n + 1) as f64).ln())
}

fn correa_value(x: &Sample, m: usize, range: CorreaRange) -> Result<f64> {
    let n = x.len();
    check_window(n, m)?;
    let last = match range {
        CorreaRange::Full => n,
        CorreaRange::Truncated => n - m,
    };
    let mi = m as isize;
    let mut sum = 0.0;
    for i in 1..=last {
        let ii = i as isize;
        let mean = (ii - mi..=ii + mi).map(|j| x.order_stat(j)).sum::<f64>() / (2 * m + 1) as f64;
        let (mut cross, mut square) = (0.0, 0.0);
        for j in ii - mi..=ii + mi {
            let d = x.order_stat(j) - mean;
            cross += d * (j - ii) as f64;
            square += d * d;
        }
        sum += ln_positive(cross / (n as f64 * square), i)?;
    }
    Ok(-sum / n as f64)
}

/// Vasicek estimator with window `m`.
pub fn vasicek(x: &Sample, m: usize) -> Result<EntropyEstimate> {
    SpacingConfig::new(m).estimate(EstimatorId::Vasicek, x)
}

/// van Es estimator with one-sided spacings of order `m`.
pub fn van_es(x: &Sample, m: usize) -> Result<EntropyEstimate> {
    SpacingConfig::new(m).estimate(EstimatorId::VanEs, x)
}

/// Correa local-linear-regression estimator (full outer range).
pub fn correa(x: &Sample, m: usize) -> Result<EntropyEstimate> {
    SpacingConfig::new(m).estimate(EstimatorId::Correa, x)
}

/// Vasicek estimator with the Wieczorkowski–Grzegorzewski bias correction.
pub fn wieczorkowski(x: &Sample, m: usize) -> Result<EntropyEstimate> {
    SpacingConfig::new(m).estimate(EstimatorId::Wieczorkowski, x)
}

/// Ebrahimi estimator with boundary-adjusted weights (printed upper tail).
pub fn ebrahimi(x: &Sample, m: usize) -> Result<EntropyEstimate> {
    SpacingConfig::new(m).estimate(EstimatorId::Ebrahimi, x)
}

/// Yousefzadeh–Arghami estimator with the monotone cdf extrapolation.
pub fn yousefzadeh(x: &Sample, m: usize) -> Result<EntropyEstimate> {
    SpacingConfig::new(m).estimate(EstimatorId::Yousefzadeh, x)
}

/// Additive correction separating the Wieczorkowski–Grzegorzewski estimator
/// from Vasicek's; it depends on (n, m) only.
pub fn wg_correction(n: usize, m: usize) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let tail: f64 = (1..=m).map(|i| digamma_unchecked((i + m - 1) as f64)).sum();
    -nf.ln() + (2.0 * mf).ln() - (1.0 - 2.0 * mf / nf) * digamma_unchecked(2.0 * mf)
        + digamma_unchecked(nf + 1.0)
        - 2.0 / nf * tail
}

fn ebrahimi_weight(i: usize, n: usize, m: usize, tail: EbrahimiTail) -> f64 {
    if i <= m {
        1.0 + (i - 1) as f64 / m as f64
    } else if i <= n - m {
        2.0
    } else {
        let denom = match tail {
            EbrahimiTail::Printed => n,
            EbrahimiTail::Symmetric => m,
        };
        1.0 + (n - i) as f64 / denom as f64
    }
}

fn ebrahimi_value(x: &Sample, m: usize, tail: EbrahimiTail) -> Result<f64> {
    let n = x.len();
    check_window(n, m)?;
    let mut sum = 0.0;
    for i in 1..=n {
        let c = ebrahimi_weight(i, n, m, tail);
        sum += ln_positive(n as f64 / (c * m as f64) * spacing(x, i, m), i)?;
    }
    Ok(sum / n as f64)
}

/// The smoothed cdf estimate of Yousefzadeh and Arghami evaluated at each
/// order statistic, i.e. `F(X(1)), ..., F(X(n))`.
pub fn yousefzadeh_cdf(x: &Sample, upper: UpperExtrapolation) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 4 {
        return Err(Error::SampleTooSmall { min: 4, got: n });
    }
    let s = x.sorted();
    let stretch = n as f64 / (n - 1) as f64;
    // ext[k] = X(k) for k = 0..=n+1
    let mut ext = Vec::with_capacity(n + 2);
    ext.push(s[0] - stretch * (s[1] - s[0]));
    ext.extend_from_slice(s);
    let top = stretch * (s[n - 1] - s[n - 2]);
    ext.push(match upper {
        UpperExtrapolation::Repaired => s[n - 1] + top,
        UpperExtrapolation::Strict => s[n - 1] - top,
    });

    let c = (n - 1) as f64 / (n * (n + 1)) as f64;
    // piece i covers [X(i), X(i+1)] for i = 1..n-1
    let piece = |i: usize, v: f64| -> Result<f64> {
        let left = ext[i + 1] - ext[i - 1];
        let right = ext[i + 2] - ext[i];
        if left == 0.0 {
            return Err(Error::DegenerateSpacings { index: i });
        }
        if right == 0.0 {
            return Err(Error::DegenerateSpacings { index: i + 1 });
        }
        Ok(c * (i as f64
            + 1.0 / (n - 1) as f64
            + (v - ext[i - 1]) / left
            + (v - ext[i]) / right))
    };
    let mut f = Vec::with_capacity(n);
    for k in 1..n {
        f.push(piece(k, ext[k])?);
    }
    f.push(piece(n - 1, ext[n])?);
    if let Some(k) = f.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::MalformedCdf { index: k + 2 });
    }
    Ok(f)
}

fn yousefzadeh_value(x: &Sample, m: usize, upper: UpperExtrapolation) -> Result<f64> {
    let n = x.len();
    check_window(n, m)?;
    let f = yousefzadeh_cdf(x, upper)?;
    let cdf_at = |i: isize| f[(i.clamp(1, n as isize) - 1) as usize];
    let mut terms = Vec::with_capacity(n);
    for i in 1..=n {
        let (lo, hi) = (i as isize - m as isize, (i + m) as isize);
        let dx = x.order_stat(hi) - x.order_stat(lo);
        let df = cdf_at(hi) - cdf_at(lo);
        terms.push((ln_positive(dx / df, i)?, df));
    }
    let total: f64 = terms.iter().map(|(_, df)| df).sum();
    Ok(terms.iter().map(|(l, df)| l * df / total).sum())
}
