//! Monte-Carlo experiments: bias, variance and MSE of several estimators
//! applied to the same replicated samples, plus table rendering.
//!
//! A plan is a small TOML document:
//!
//! ```toml
//! name = "normal-10"
//! distribution = "normal(0,1)"
//! n = 10
//! replications = 5000
//! seed = 42
//!
//! [[estimators]]
//! estimator = "vasicek"
//! m = 3
//!
//! [[estimators]]
//! estimator = "kernel"
//! h = 0.157
//! ```
//!
//! An optional `[contamination]` table (`contaminant`, `eps`) switches the
//! sampler to the mixture while the bias is still measured against the
//! entropy of the clean distribution.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bandwidth::normal_reference_h;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::estimate::EstimatorId;
use crate::kernel::{entropy_hat, KernelConfig, KernelKind, DEFAULT_EPS};
use crate::numfmt::significant;
use crate::parzen::{parzen_entropy_star, parzen_entropy_tilde, LocationScaleNull, NullShape};
use crate::quad::QuadratureConfig;
use crate::rng::replicate;
use crate::sample::Sample;
use crate::spacing::{CorreaRange, EbrahimiTail, SpacingConfig, UpperExtrapolation};

/// JSON schema of the documents produced by [`assemble_table`] with
/// [`TableFormat::Json`].
pub const REPORT_SCHEMA: &str = include_str!("../schemas/mc_report.schema.json");

/// Significant digits of every number in a rendered table.
pub const TABLE_DIGITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Contamination {
    pub contaminant: Distribution,
    pub eps: f64,
}

/// One estimator of a plan together with its tuning. Unset tunings take
/// defaults that depend on the sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSpec {
    pub estimator: EstimatorId,
    /// Row label; defaults to the estimator id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correa_range: Option<CorreaRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ebrahimi_tail: Option<EbrahimiTail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_extrapolation: Option<UpperExtrapolation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null: Option<NullShape>,
}

impl EstimatorSpec {
    pub fn new(id: EstimatorId) -> Self {
        Self {
            estimator: id,
            label: None,
            m: None,
            h: None,
            eps: None,
            correa_range: None,
            ebrahimi_tail: None,
            upper_extrapolation: None,
            quadrature: None,
            null: None,
        }
    }

    pub fn spacing(id: EstimatorId, m: usize) -> Self {
        Self {
            m: Some(m),
            ..Self::new(id)
        }
    }

    pub fn kernel(h: f64) -> Self {
        Self {
            h: Some(h),
            ..Self::new(EstimatorId::Kernel)
        }
    }

    pub fn label(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => self.estimator.as_str().to_string(),
        }
    }

    /// Fills in defaults for samples of size `n` and validates the result.
    pub fn resolve(&self, n: usize) -> Result<Estimator> {
        let id = self.estimator;
        let kernel_cfg = || -> Result<KernelConfig> {
            let h = match self.h {
                Some(h) => h,
                None => normal_reference_h(n)?,
            };
            let cfg = KernelConfig {
                kernel: KernelKind::Gaussian,
                h,
                eps: self.eps.unwrap_or(DEFAULT_EPS),
                quadrature: self.quadrature.unwrap_or_default(),
            };
            cfg.validate()?;
            Ok(cfg)
        };
        let resolved = if id.is_spacing() {
            let m = self.m.unwrap_or_else(|| SpacingConfig::default_window(n));
            if m == 0 || 2 * m > n {
                return Err(Error::InvalidWindow { m, n });
            }
            let mut cfg = SpacingConfig::new(m);
            if let Some(r) = self.correa_range {
                cfg.correa_range = r;
            }
            if let Some(t) = self.ebrahimi_tail {
                cfg.ebrahimi_tail = t;
            }
            if let Some(u) = self.upper_extrapolation {
                cfg.upper_extrapolation = u;
            }
            Estimator::Spacing { id, cfg }
        } else {
            let null = LocationScaleNull {
                shape: self.null.unwrap_or_default(),
            };
            match id {
                EstimatorId::Kernel => Estimator::Kernel(kernel_cfg()?),
                EstimatorId::ParzenStar => Estimator::ParzenStar {
                    null,
                    cfg: kernel_cfg()?,
                },
                EstimatorId::ParzenTilde => {
                    let eps = self.eps.unwrap_or(DEFAULT_EPS);
                    if !(eps > 0.0 && eps < 0.5) {
                        return Err(Error::domain("trimming level eps", eps));
                    }
                    Estimator::ParzenTilde { null, eps }
                }
                _ => unreachable!("spacing ids handled above"),
            }
        };
        Ok(resolved)
    }
}

/// A fully tuned estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Spacing { id: EstimatorId, cfg: SpacingConfig },
    Kernel(KernelConfig),
    ParzenStar { null: LocationScaleNull, cfg: KernelConfig },
    ParzenTilde { null: LocationScaleNull, eps: f64 },
}

impl Estimator {
    pub fn id(&self) -> EstimatorId {
        match self {
            Estimator::Spacing { id, .. } => *id,
            Estimator::Kernel(_) => EstimatorId::Kernel,
            Estimator::ParzenStar { .. } => EstimatorId::ParzenStar,
            Estimator::ParzenTilde { .. } => EstimatorId::ParzenTilde,
        }
    }

    pub fn apply(&self, x: &Sample) -> Result<f64> {
        let e = match self {
            Estimator::Spacing { id, cfg } => cfg.estimate(*id, x)?,
            Estimator::Kernel(cfg) => entropy_hat(x, cfg)?,
            Estimator::ParzenStar { null, cfg } => parzen_entropy_star(x, null, cfg)?,
            Estimator::ParzenTilde { null, eps } => parzen_entropy_tilde(x, null, *eps)?,
        };
        Ok(e.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default)]
    pub name: String,
    pub distribution: Distribution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contamination: Option<Contamination>,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub estimators: Vec<EstimatorSpec>,
}

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plans always serialize")
    }

    /// Entropy the estimates are compared with: that of the clean
    /// distribution, even under contamination.
    pub fn truth(&self) -> f64 {
        self.distribution.true_entropy()
    }

    pub fn validate(&self) -> Result<()> {
        self.resolve().map(|_| ())
    }

    /// Validates the plan and resolves every estimator.
    pub fn resolve(&self) -> Result<Vec<(String, Estimator)>> {
        if self.replications < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 replications, got {}",
                self.replications
            )));
        }
        if self.n < 2 {
            return Err(Error::SampleTooSmall {
                min: 2,
                got: self.n,
            });
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidParameter("plan lists no estimators".into()));
        }
        if let Some(c) = &self.contamination {
            if !(0.0..=1.0).contains(&c.eps) {
                return Err(Error::domain("contamination proportion", c.eps));
            }
        }
        self.estimators
            .iter()
            .map(|s| Ok((s.label(), s.resolve(self.n)?)))
            .collect()
    }
}

impl FromStr for ExperimentPlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_toml(s)
    }
}

/// Monte-Carlo summary of one estimator. Moments use the divide-by-R
/// formulas over the replications that succeeded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub estimator: EstimatorId,
    pub label: String,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub failures: usize,
    pub replications: usize,
}

impl McReport {
    /// Rows with failed replications are flagged and kept out of reference
    /// comparisons.
    pub fn is_clean(&self) -> bool {
        self.failures == 0
    }

    fn from_values(label: String, estimator: EstimatorId, values: &[Option<f64>], truth: f64) -> Self {
        let ok: Vec<f64> = values.iter().flatten().copied().collect();
        let k = ok.len() as f64;
        let mean = ok.iter().sum::<f64>() / k;
        let variance = ok.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
        let mse = ok.iter().map(|v| (v - truth) * (v - truth)).sum::<f64>() / k;
        Self {
            estimator,
            label,
            mean,
            bias: mean - truth,
            variance,
            mse,
            failures: values.len() - ok.len(),
            replications: values.len(),
        }
    }
}

/// Runs the plan: replication `r` draws one sample from stream `r` of the
/// seed and applies every estimator to it.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<Vec<McReport>> {
    let estimators = plan.resolve()?;
    let runs = replicate(plan.seed, plan.replications, |_, rng| -> Result<Vec<Option<f64>>> {
        let x = match &plan.contamination {
            Some(c) => {
                plan.distribution
                    .sample_contaminated(&c.contaminant, c.eps, plan.n, rng)?
                    .sample
            }
            None => plan.distribution.sample(plan.n, rng)?,
        };
        Ok(estimators.iter().map(|(_, e)| e.apply(&x).ok()).collect())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let truth = plan.truth();
    Ok(estimators
        .iter()
        .enumerate()
        .map(|(j, (label, e))| {
            let column: Vec<Option<f64>> = runs.iter().map(|run| run[j]).collect();
            McReport::from_values(label.clone(), e.id(), &column, truth)
        })
        .collect())
}

/// [`run_experiment`] for a plan that must carry a contamination block.
pub fn run_contamination(plan: &ExperimentPlan) -> Result<Vec<McReport>> {
    if plan.contamination.is_none() {
        return Err(Error::InvalidParameter(
            "contamination run needs a [contamination] block".into(),
        ));
    }
    run_experiment(plan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Text,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "text" | "txt" => Ok(Self::Text),
            _ => Err(Error::Parse(format!("unknown table format `{s}`"))),
        }
    }
}

/// One rendered row, as read back from a CSV table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub estimator: String,
    pub estimate: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub failures: usize,
}

const COLUMNS: [&str; 6] = ["estimator", "estimate", "bias", "variance", "mse", "failures"];

fn cells(r: &McReport) -> [String; 6] {
    [
        r.label.clone(),
        significant(r.mean, TABLE_DIGITS),
        significant(r.bias, TABLE_DIGITS),
        significant(r.variance, TABLE_DIGITS),
        significant(r.mse, TABLE_DIGITS),
        r.failures.to_string(),
    ]
}

fn rounded(v: f64) -> Option<f64> {
    v.is_finite()
        .then(|| significant(v, TABLE_DIGITS).parse().expect("formatted number parses"))
}

/// Renders the reports of one plan. Every format carries the crate
/// version, the seed and the full plan, enough to rerun it.
pub fn assemble_table(plan: &ExperimentPlan, reports: &[McReport], format: TableFormat) -> String {
    let version = env!("CARGO_PKG_VERSION");
    match format {
        TableFormat::Csv | TableFormat::Text => {
            let mut out = String::new();
            writeln!(out, "# qdf-entropy {version}").unwrap();
            writeln!(out, "# seed: {}", plan.seed).unwrap();
            writeln!(out, "# truth: {}", significant(plan.truth(), TABLE_DIGITS)).unwrap();
            for line in plan.to_toml().lines().filter(|l| !l.is_empty()) {
                writeln!(out, "# plan: {line}").unwrap();
            }
            if format == TableFormat::Csv {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(COLUMNS).unwrap();
                for r in reports {
                    w.write_record(cells(r)).unwrap();
                }
                out.push_str(&String::from_utf8(w.into_inner().unwrap()).unwrap());
            } else {
                let rows: Vec<[String; 6]> = reports.iter().map(cells).collect();
                let widths: Vec<usize> = (0..6)
                    .map(|c| {
                        rows.iter()
                            .map(|r| r[c].len())
                            .chain([COLUMNS[c].len()])
                            .max()
                            .unwrap()
                    })
                    .collect();
                let header: [String; 6] = COLUMNS.map(String::from);
                for row in std::iter::once(&header).chain(&rows) {
                    let line: Vec<String> = row
                        .iter()
                        .enumerate()
                        .map(|(c, cell)| {
                            if c == 0 {
                                format!("{cell:<w$}", w = widths[c])
                            } else {
                                format!("{cell:>w$}", w = widths[c])
                            }
                        })
                        .collect();
                    writeln!(out, "{}", line.join("  ")).unwrap();
                }
            }
            out
        }
        TableFormat::Json => {
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "estimator": r.label,
                        "id": r.estimator,
                        "estimate": rounded(r.mean),
                        "bias": rounded(r.bias),
                        "variance": rounded(r.variance),
                        "mse": rounded(r.mse),
                        "failures": r.failures,
                        "replications": r.replications,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "version": version,
                "seed": plan.seed,
                "truth": rounded(plan.truth()),
                "plan": plan,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json document serializes");
            s.push('\n');
            s
        }
    }
}

/// Reads back the rows of a CSV table written by [`assemble_table`].
pub fn parse_csv_table(text: &str) -> Result<Vec<TableRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// Ids of the built-in reproduction plans, in table order.
pub const BUILTIN_PLANS: [&str; 11] = [
    "1", "2", "3", "3u", "3w", "3e", "3t3", "3t5", "3c", "4", "5",
];

/// Built-in plan `id` (see [`BUILTIN_PLANS`]): the four classical spacing
/// estimators and the kernel estimator at the bandwidth tuned for that
/// setting.
pub fn builtin_plan(id: &str, replications: usize, seed: u64) -> Result<ExperimentPlan> {
    let normal = Distribution::standard_normal();
    let contaminated = |eps| Contamination {
        contaminant: Distribution::Uniform01,
        eps,
    };
    let (distribution, contamination, n, h) = match id.to_ascii_lowercase().as_str() {
        "1" => (normal, None, 10, 0.157),
        "2" => (normal, None, 20, 0.081),
        "3" => (normal, None, 50, 0.0333),
        "3u" => (Distribution::Uniform01, None, 50, 0.522),
        "3w" => (Distribution::weibull(2.0, 0.5)?, None, 50, 0.6104),
        "3e" => (Distribution::exponential(1.0)?, None, 50, 0.712),
        "3t3" => (Distribution::student_t(3.0)?, None, 50, 0.0336),
        "3t5" => (Distribution::student_t(5.0)?, None, 50, 0.0344),
        "3c" => (Distribution::Cauchy, None, 50, 0.0235),
        "4" => (normal, Some(contaminated(0.04)), 50, 0.0333),
        "5" => (normal, Some(contaminated(0.10)), 50, 0.0333),
        other => return Err(Error::Parse(format!("unknown built-in table `{other}`"))),
    };
    let m = SpacingConfig::default_window(n);
    let plan = ExperimentPlan {
        name: format!("table-{}", id.to_ascii_lowercase()),
        distribution,
        contamination,
        n,
        replications,
        seed,
        estimators: vec![
            EstimatorSpec::spacing(EstimatorId::Vasicek, m),
            EstimatorSpec::spacing(EstimatorId::VanEs, m),
            EstimatorSpec::spacing(EstimatorId::Correa, m),
            EstimatorSpec::spacing(EstimatorId::Wieczorkowski, m),
            EstimatorSpec::kernel(h),
        ],
    };
    plan.validate()?;
    Ok(plan)
}

/// Bandwidths used by the power study, per alternative.
pub fn power_alternatives() -> Vec<(Distribution, f64)> {
    vec![
        (Distribution::Uniform01, 0.5297),
        (Distribution::Weibull { shape: 2.0, scale: 0.5 }, 0.6555),
        (Distribution::StudentT { dof: 5.0 }, 0.0310),
        (Distribution::StudentT { dof: 3.0 }, 0.0189),
    ]
}
