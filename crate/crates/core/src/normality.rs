//! Entropy-based test of normality.
//!
//! The statistic is `T = ln(sigma sqrt(2 pi e)) - H`, the gap between the
//! largest entropy any law with the sample's variance can have and the
//! kernel estimate. It is scale invariant and grows under non-normal
//! alternatives, so the test rejects for large `T`. Critical values are
//! upper quantiles of `T` over simulated normal samples.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bandwidth::{grid_search_h, BandwidthGrid};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::kernel::{entropy_hat, KernelConfig};
use crate::numfmt::significant;
use crate::rng::{derive_seed, replicate};
use crate::sample::Sample;

/// Levels of the published critical-value table.
pub const STANDARD_ALPHAS: [f64; 5] = [0.1, 0.05, 0.025, 0.01, 0.005];

/// `ln(sigma_n sqrt(2 pi e)) - H` with the population standard deviation.
pub fn statistic_tn(x: &Sample, cfg: &KernelConfig) -> Result<f64> {
    let var = x.population_variance();
    if !(var > 0.0) {
        return Err(Error::DegenerateSample);
    }
    let h = entropy_hat(x, cfg)?.value;
    Ok(0.5 * (2.0 * std::f64::consts::PI * var).ln() + 0.5 - h)
}

/// Bandwidth for the statistic under the null: the normal-optimal value
/// where one is known, otherwise a grid search of the entropy MSE on
/// normal samples.
pub fn default_null_h(n: usize, eps: f64, seed: u64) -> Result<f64> {
    match n {
        10 => Ok(0.157),
        20 => Ok(0.081),
        50 => Ok(0.0333),
        _ => {
            let template = KernelConfig::new(0.1)?.with_eps(eps)?;
            let grid = BandwidthGrid::log_spaced(0.005, 1.0, 24)?;
            let search = grid_search_h(
                &Distribution::standard_normal(),
                n,
                &template,
                &grid,
                400,
                derive_seed(seed, 0x6e75_6c6c),
            )?;
            Ok(search.h_star)
        }
    }
}

/// One calibrated critical value and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalEntry {
    pub n: usize,
    pub alpha: f64,
    pub critical_value: f64,
    pub reps: usize,
    pub seed: u64,
    pub h: f64,
    pub eps: f64,
}

impl CriticalEntry {
    /// Kernel settings under which the value was calibrated.
    pub fn kernel_config(&self) -> Result<KernelConfig> {
        KernelConfig::new(self.h)?.with_eps(self.eps)
    }
}

const TABLE_HEADER: [&str; 7] = ["n", "alpha", "critical_value", "reps", "seed", "h", "eps"];

/// Critical values of the statistic keyed by (n, alpha).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CriticalValueTable {
    entries: Vec<CriticalEntry>,
}

fn same_alpha(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

impl CriticalValueTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[CriticalEntry] {
        &self.entries
    }

    /// Adds or replaces the entry for `(entry.n, entry.alpha)`.
    pub fn insert(&mut self, entry: CriticalEntry) {
        match self
            .entries
            .iter_mut()
            .find(|e| e.n == entry.n && same_alpha(e.alpha, entry.alpha))
        {
            Some(slot) => *slot = entry,
            None => self.entries.push(entry),
        }
        self.entries
            .sort_by(|a, b| a.n.cmp(&b.n).then(b.alpha.total_cmp(&a.alpha)));
    }

    pub fn entry(&self, n: usize, alpha: f64) -> Result<&CriticalEntry> {
        self.entries
            .iter()
            .find(|e| e.n == n && same_alpha(e.alpha, alpha))
            .ok_or(Error::MissingCalibration { n, alpha })
    }

    pub fn get(&self, n: usize, alpha: f64) -> Result<f64> {
        Ok(self.entry(n, alpha)?.critical_value)
    }

    /// Writes the table as comma-separated text with a fixed header.
    pub fn to_csv_string(&self) -> String {
        let mut out = TABLE_HEADER.join(",");
        out.push('\n');
        for e in &self.entries {
            let row = [
                e.n.to_string(),
                significant(e.alpha, 8),
                significant(e.critical_value, 8),
                e.reps.to_string(),
                e.seed.to_string(),
                significant(e.h, 8),
                significant(e.eps, 8),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Reads a table; lines starting with `#` are ignored.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| Error::Parse(e.to_string()))?;
        if header.iter().ne(TABLE_HEADER) {
            return Err(Error::Parse(format!(
                "critical value table header must be `{}`",
                TABLE_HEADER.join(",")
            )));
        }
        let mut table = Self::new();
        for row in reader.deserialize::<CriticalEntry>() {
            table.insert(row.map_err(|e| Error::Parse(e.to_string()))?);
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }
}

/// Empirical upper `alpha` quantile: the value `c` among the sorted
/// statistics with exactly `floor(alpha R)` of the `R` values at or above it
/// (absent ties).
pub fn upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    let r = sorted.len();
    let tail = ((alpha * r as f64).floor() as usize).clamp(1, r);
    sorted[r - tail]
}

/// Simulated null distribution of the statistic: `reps` sorted values.
pub fn null_statistics(n: usize, reps: usize, cfg: &KernelConfig, seed: u64) -> Result<Vec<f64>> {
    let d = Distribution::standard_normal();
    let mut values = replicate(seed, reps, |_, rng| statistic_tn(&d.sample(n, rng)?, cfg))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Calibrates critical values for every `n` in `ns` and level in `alphas`.
/// `h_for(n)` gives the bandwidth used for samples of size `n`.
pub fn calibrate_critical_values<H>(
    ns: &[usize],
    alphas: &[f64],
    reps: usize,
    eps: f64,
    seed: u64,
    mut h_for: H,
) -> Result<CriticalValueTable>
where
    H: FnMut(usize) -> Result<f64>,
{
    if reps < 1000 {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least 1000 replications, got {reps}"
        )));
    }
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain("level alpha", alpha));
        }
        if alpha * (reps as f64) < 20.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} leaves fewer than 20 tail replications out of {reps}"
            )));
        }
    }
    let mut table = CriticalValueTable::new();
    for &n in ns {
        let cfg = KernelConfig::new(h_for(n)?)?.with_eps(eps)?;
        let stats = null_statistics(n, reps, &cfg, derive_seed(seed, n as u64))?;
        for &alpha in alphas {
            table.insert(CriticalEntry {
                n,
                alpha,
                critical_value: upper_quantile(&stats, alpha),
                reps,
                seed,
                h: cfg.h,
                eps,
            });
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub n: usize,
}

/// Rejects normality iff the statistic is at or above the critical value.
pub fn test_normality(
    x: &Sample,
    alpha: f64,
    table: &CriticalValueTable,
    cfg: &KernelConfig,
) -> Result<TestResult> {
    let critical_value = table.get(x.len(), alpha)?;
    let statistic = statistic_tn(x, cfg)?;
    Ok(TestResult {
        statistic,
        critical_value,
        alpha,
        reject: statistic >= critical_value,
        n: x.len(),
    })
}

/// Rejection rate against `alternative` over `reps` samples of size `n`,
/// computing the statistic with `cfg`.
pub fn power_study(
    alternative: &Distribution,
    n: usize,
    alpha: f64,
    reps: usize,
    table: &CriticalValueTable,
    cfg: &KernelConfig,
    seed: u64,
) -> Result<f64> {
    if reps == 0 {
        return Err(Error::InvalidParameter("power study needs replications".into()));
    }
    let critical = table.get(n, alpha)?;
    let rejected = replicate(seed, reps, |_, rng| -> Result<bool> {
        Ok(statistic_tn(&alternative.sample(n, rng)?, cfg)? >= critical)
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    Ok(rejected.iter().filter(|r| **r).count() as f64 / reps as f64)
}
