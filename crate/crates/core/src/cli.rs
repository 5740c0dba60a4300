//! Command-line front end. The `qdf-entropy` binary is a thin wrapper
//! around [`run`].
//!
//! Exit status: 0 on success, 2 for usage errors, 3 for unreadable or
//! unsuitable data, 4 for numerical failures of an estimator, 1 otherwise.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bandwidth::{grid_search_h, median_amse_h, BandwidthGrid};
use crate::dist::Distribution;
use crate::error::Error;
use crate::estimate::EstimatorId;
use crate::harness::{
    assemble_table, builtin_plan, power_alternatives, run_experiment, Contamination, EstimatorSpec,
    ExperimentPlan, TableFormat, BUILTIN_PLANS,
};
use crate::kernel::{KernelConfig, DEFAULT_EPS};
use crate::normality::{
    calibrate_critical_values, default_null_h, power_study, test_normality, CriticalValueTable,
    STANDARD_ALPHAS,
};
use crate::numfmt::significant;
use crate::parzen::NullShape;
use crate::quad::QuadratureConfig;
use crate::rng::derive_seed;
use crate::sample::Sample;
use crate::spacing::{CorreaRange, EbrahimiTail, UpperExtrapolation};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "qdf-entropy", version, about = "Entropy estimation and an entropy-based normality test")]
pub struct Cli {
    /// Worker threads for Monte-Carlo runs (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the entropy of a sample file (one value per line).
    Estimate(EstimateArgs),
    /// Monte-Carlo bias, variance and MSE of estimators.
    Simulate(SimulateArgs),
    /// Like `simulate`, drawing from a contaminated distribution.
    Contaminate(ContaminateArgs),
    /// Grid search of the kernel bandwidth by Monte-Carlo MSE.
    Bandwidth(BandwidthArgs),
    /// Calibrate critical values of the normality statistic.
    Calibrate(CalibrateArgs),
    /// Test a sample file for normality against calibrated critical values.
    Test(TestArgs),
    /// Power of the normality test against an alternative.
    Power(PowerArgs),
    /// Run the built-in reproduction plans.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TuningArgs {
    /// Spacing window.
    #[arg(long)]
    pub m: Option<usize>,
    /// Kernel bandwidth (default: normal-reference AMSE rule).
    #[arg(long)]
    pub h: Option<f64>,
    /// Trimming level.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    /// Quadrature node budget.
    #[arg(long)]
    pub quad_max_nodes: Option<usize>,
    /// Null shape of the Parzen estimators.
    #[arg(long, value_parser = ["normal", "uniform"])]
    pub null: Option<String>,
    #[arg(long, value_parser = ["full", "truncated"])]
    pub correa_range: Option<String>,
    #[arg(long, value_parser = ["printed", "symmetric"])]
    pub ebrahimi_tail: Option<String>,
    #[arg(long, value_parser = ["repaired", "strict"])]
    pub upper_extrapolation: Option<String>,
}

impl TuningArgs {
    fn quadrature(&self) -> Option<QuadratureConfig> {
        if self.quad_tol.is_none() && self.quad_max_nodes.is_none() {
            return None;
        }
        let mut q = QuadratureConfig::default();
        if let Some(t) = self.quad_tol {
            q.tolerance = t;
        }
        if let Some(b) = self.quad_max_nodes {
            q.node_budget = b;
        }
        Some(q)
    }

    fn kernel_config(&self, default_h: f64) -> Result<KernelConfig, CliError> {
        let cfg = KernelConfig {
            h: self.h.unwrap_or(default_h),
            eps: self.eps.unwrap_or(DEFAULT_EPS),
            quadrature: self.quadrature().unwrap_or_default(),
            ..KernelConfig::new(default_h)?
        };
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }

    fn spec(&self, id: EstimatorId) -> EstimatorSpec {
        let mut spec = EstimatorSpec::new(id);
        if id.is_spacing() {
            spec.m = self.m;
            spec.correa_range = self.correa_range.as_deref().map(|s| match s {
                "truncated" => CorreaRange::Truncated,
                _ => CorreaRange::Full,
            });
            spec.ebrahimi_tail = self.ebrahimi_tail.as_deref().map(|s| match s {
                "symmetric" => EbrahimiTail::Symmetric,
                _ => EbrahimiTail::Printed,
            });
            spec.upper_extrapolation = self.upper_extrapolation.as_deref().map(|s| match s {
                "strict" => UpperExtrapolation::Strict,
                _ => UpperExtrapolation::Repaired,
            });
        } else {
            spec.eps = self.eps;
            if id != EstimatorId::ParzenTilde {
                spec.h = self.h;
                spec.quadrature = self.quadrature();
            }
            spec.null = self.null.as_deref().map(|s| match s {
                "uniform" => NullShape::Uniform,
                _ => NullShape::Normal,
            });
        }
        spec
    }
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Sample file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long)]
    pub estimator: EstimatorId,
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Output format: text prints the value alone.
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    pub format: String,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// TOML plan file; the flags below override or replace it.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub dist: Option<Distribution>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Comma-separated estimator ids.
    #[arg(long, value_delimiter = ',')]
    pub estimators: Vec<EstimatorId>,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "text")]
    pub format: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
}

#[derive(Debug, Args)]
pub struct ContaminateArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long, default_value = "uniform")]
    pub contaminant: Distribution,
    /// Contamination proportion.
    #[arg(long)]
    pub proportion: f64,
}

#[derive(Debug, Args)]
pub struct BandwidthArgs {
    #[arg(long)]
    pub dist: Distribution,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Candidates as `min:max:count` (log spaced).
    #[arg(long, default_value = "0.001:1:40")]
    pub grid: BandwidthGrid,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_ALPHAS)]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 20000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// Bandwidth for every n (default: tuned per n under the null).
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Sample file, or `-` for standard input.
    pub input: PathBuf,
    /// Critical-value table written by `calibrate`.
    #[arg(long)]
    pub critical: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Critical-value table written by `calibrate`.
    #[arg(long)]
    pub critical: PathBuf,
    #[arg(long)]
    pub dist: Distribution,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 20000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// Bandwidth of the statistic under the alternative (default: the
    /// calibration bandwidth).
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// One of 1, 2, 3, 3u, 3w, 3e, 3t3, 3t5, 3c, 4, 5, critical, power, all.
    #[arg(long)]
    pub table: String,
    /// Replications (default 5000 for estimator tables, 20000 otherwise).
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "csv")]
    pub format: TableFormat,
    /// Output file, or directory for `all` (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A failed invocation and its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Library(e) if e.is_numeric() => 4,
            CliError::Library(
                Error::Parse(_)
                | Error::SampleTooSmall { .. }
                | Error::NonFiniteValue { .. }
                | Error::MissingCalibration { .. },
            ) => 3,
            CliError::Library(
                Error::InvalidParameter(_) | Error::Domain { .. } | Error::InvalidWindow { .. },
            ) => 2,
            CliError::Library(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &mut buf)),
            Err(e) => Err(CliError::Io(e.to_string())),
        },
        None => dispatch(&cli.command, &mut buf),
    };
    let result = result.and_then(|()| out.write_all(&buf).map_err(|e| CliError::Io(e.to_string())));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, out: &mut Vec<u8>) -> Result<(), CliError> {
    match command {
        Command::Estimate(a) => estimate(a, out),
        Command::Simulate(a) => simulate(&a.plan, None, out),
        Command::Contaminate(a) => simulate(
            &a.plan,
            Some(Contamination {
                contaminant: a.contaminant,
                eps: a.proportion,
            }),
            out,
        ),
        Command::Bandwidth(a) => bandwidth(a, out),
        Command::Calibrate(a) => calibrate(a, out),
        Command::Test(a) => test(a, out),
        Command::Power(a) => power(a, out),
        Command::Tables(a) => tables(a, out),
    }
}

/// Reads one value per line; blank lines and lines starting with `#` are
/// skipped.
pub fn parse_sample(text: &str) -> Result<Sample, Error> {
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: `{line}` is not a number", k + 1)))?;
        values.push(v);
    }
    Sample::new(values)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(e.to_string()))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn read_sample(path: &Path) -> Result<Sample, CliError> {
    Ok(parse_sample(&read_input(path)?)?)
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn header(lines: &[(&str, String)]) -> String {
    let mut s = format!("# qdf-entropy {VERSION}\n");
    for (k, v) in lines {
        writeln!(s, "# {k}: {v}").unwrap();
    }
    s
}

fn estimate(a: &EstimateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.estimator.is_spacing() && a.tuning.m.is_none() {
        return Err(CliError::Usage(format!("--m is required for `{}`", a.estimator)));
    }
    let x = read_sample(&a.input)?;
    let spec = a.tuning.spec(a.estimator);
    let estimator = spec.resolve(x.len())?;
    let value = estimator.apply(&x)?;
    let text = if a.format == "json" {
        let doc = serde_json::json!({
            "version": VERSION,
            "estimator": a.estimator,
            "n": x.len(),
            "config": format!("{estimator:?}"),
            "value": value,
        });
        format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
    } else {
        format!("{}\n", significant(value, 8))
    };
    emit(None, &text, out)
}

fn simulate(
    a: &PlanArgs,
    contamination: Option<Contamination>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut plan = match &a.plan {
        Some(p) => ExperimentPlan::from_toml(&read_input(p)?).map_err(usage)?,
        None => {
            let (Some(distribution), Some(n), Some(replications)) = (a.dist, a.n, a.reps) else {
                return Err(CliError::Usage(
                    "either --plan or all of --dist, --n and --reps are required".into(),
                ));
            };
            if a.estimators.is_empty() {
                return Err(CliError::Usage("--estimators is required without --plan".into()));
            }
            ExperimentPlan {
                name: String::new(),
                distribution,
                contamination: None,
                n,
                replications,
                seed: a.seed,
                estimators: a.estimators.iter().map(|&id| a.tuning.spec(id)).collect(),
            }
        }
    };
    plan.seed = a.seed;
    if a.plan.is_some() {
        if let Some(d) = a.dist {
            plan.distribution = d;
        }
        if let Some(n) = a.n {
            plan.n = n;
        }
        if let Some(r) = a.reps {
            plan.replications = r;
        }
    }
    if contamination.is_some() {
        plan.contamination = contamination;
    }
    plan.validate().map_err(usage)?;
    let reports = run_experiment(&plan)?;
    emit(a.output.as_deref(), &assemble_table(&plan, &reports, a.format), out)
}

fn bandwidth(a: &BandwidthArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let template = a.tuning.kernel_config(0.1)?;
    let search = grid_search_h(&a.dist, a.n, &template, &a.grid, a.reps, a.seed)?;
    let amse = match median_amse_h(&a.dist, a.n) {
        Ok(h) => significant(h, 8),
        Err(_) => "undefined".into(),
    };
    let mut text = header(&[
        ("seed", a.seed.to_string()),
        ("distribution", a.dist.to_string()),
        ("n", a.n.to_string()),
        ("reps", a.reps.to_string()),
        ("eps", significant(template.eps, 8)),
        ("h_star", significant(search.h_star, 8)),
        ("amse_median_h", amse),
    ]);
    text.push_str("h,mse,failures,disqualified\n");
    for p in &search.curve {
        writeln!(
            text,
            "{},{},{},{}",
            significant(p.h, 8),
            significant(p.mse, 8),
            p.failures,
            p.disqualified
        )
        .unwrap();
    }
    emit(a.output.as_deref(), &text, out)
}

fn calibrate(a: &CalibrateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(h) = a.h {
        KernelConfig::new(h).map_err(usage)?;
    }
    let table = calibrate_critical_values(&a.n, &a.alpha, a.reps, a.eps, a.seed, |n| match a.h {
        Some(h) => Ok(h),
        None => default_null_h(n, a.eps, a.seed),
    })
    .map_err(|e| if e.is_numeric() { CliError::Library(e) } else { usage(e) })?;
    let text = header(&[("seed", a.seed.to_string()), ("reps", a.reps.to_string())])
        + &table.to_csv_string();
    emit(a.output.as_deref(), &text, out)
}

fn load_table(path: &Path) -> Result<CriticalValueTable, CliError> {
    Ok(CriticalValueTable::from_csv_str(&read_input(path)?)?)
}

fn test(a: &TestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = load_table(&a.critical)?;
    let x = read_sample(&a.input)?;
    let entry = table.entry(x.len(), a.alpha)?;
    let r = test_normality(&x, a.alpha, &table, &entry.kernel_config()?)?;
    let text = format!(
        "n: {}\nalpha: {}\nstatistic: {}\ncritical_value: {}\ndecision: {}\n",
        r.n,
        a.alpha,
        significant(r.statistic, 8),
        significant(r.critical_value, 8),
        if r.reject { "reject normality" } else { "do not reject normality" }
    );
    emit(None, &text, out)
}

fn power(a: &PowerArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = load_table(&a.critical)?;
    let entry = table.entry(a.n, a.alpha)?;
    let mut cfg = entry.kernel_config()?;
    if let Some(h) = a.h {
        cfg = KernelConfig { h, ..cfg };
        cfg.validate().map_err(usage)?;
    }
    let p = power_study(&a.dist, a.n, a.alpha, a.reps, &table, &cfg, a.seed)?;
    let text = header(&[
        ("seed", a.seed.to_string()),
        ("distribution", a.dist.to_string()),
        ("n", a.n.to_string()),
        ("alpha", a.alpha.to_string()),
        ("reps", a.reps.to_string()),
        ("h", significant(cfg.h, 8)),
        ("critical_value", significant(entry.critical_value, 8)),
    ]) + &format!("power: {}\n", significant(p, 8));
    emit(None, &text, out)
}

/// Critical values at n = 50 with the bandwidth tuned for normal samples.
pub fn critical_table_n50(reps: usize, seed: u64) -> Result<CriticalValueTable, Error> {
    calibrate_critical_values(&[50], &STANDARD_ALPHAS, reps, DEFAULT_EPS, seed, |_| Ok(0.0333))
}

/// Power at n = 50 and level 0.05 against each alternative of
/// [`power_alternatives`], after calibrating on fresh null samples.
pub fn power_table_n50(reps: usize, seed: u64) -> Result<Vec<(Distribution, f64, f64)>, Error> {
    let table = critical_table_n50(reps, derive_seed(seed, 1))?;
    let base = table.entry(50, 0.05)?.kernel_config()?;
    power_alternatives()
        .into_iter()
        .enumerate()
        .map(|(k, (d, h))| {
            let cfg = KernelConfig { h, ..base };
            let p = power_study(&d, 50, 0.05, reps, &table, &cfg, derive_seed(seed, 2 + k as u64))?;
            Ok((d, h, p))
        })
        .collect()
}

fn table_text(id: &str, reps: Option<usize>, seed: u64, format: TableFormat) -> Result<String, CliError> {
    match id {
        "critical" => {
            let reps = reps.unwrap_or(20000);
            let table = critical_table_n50(reps, seed)?;
            Ok(header(&[
                ("seed", seed.to_string()),
                ("reps", reps.to_string()),
                ("table", "critical".into()),
            ]) + &table.to_csv_string())
        }
        "power" => {
            let reps = reps.unwrap_or(20000);
            let rows = power_table_n50(reps, seed)?;
            let mut text = header(&[
                ("seed", seed.to_string()),
                ("reps", reps.to_string()),
                ("table", "power".into()),
                ("n", "50".into()),
                ("alpha", "0.05".into()),
            ]);
            text.push_str("alternative,h,power\n");
            for (d, h, p) in rows {
                writeln!(text, "{d},{},{}", significant(h, 8), significant(p, 8)).unwrap();
            }
            Ok(text)
        }
        _ => {
            let plan = builtin_plan(id, reps.unwrap_or(5000), seed).map_err(usage)?;
            let reports = run_experiment(&plan)?;
            Ok(assemble_table(&plan, &reports, format))
        }
    }
}

fn tables(a: &TablesArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let id = a.table.to_ascii_lowercase();
    if id != "all" {
        let text = table_text(&id, a.reps, a.seed, a.format)?;
        return emit(a.output.as_deref(), &text, out);
    }
    let Some(dir) = &a.output else {
        return Err(CliError::Usage("--table all needs --output DIR".into()));
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let ext = match a.format {
        TableFormat::Csv => "csv",
        TableFormat::Json => "json",
        TableFormat::Text => "txt",
    };
    for id in BUILTIN_PLANS {
        let text = table_text(id, a.reps, a.seed, a.format)?;
        emit(Some(&dir.join(format!("table-{id}.{ext}"))), &text, out)?;
    }
    for id in ["critical", "power"] {
        let text = table_text(id, a.reps, a.seed, a.format)?;
        emit(Some(&dir.join(format!("{id}.csv"))), &text, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("qdf-entropy").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn sample_file(dir: &tempfile::TempDir, text: &str) -> String {
        let p = dir.path().join("x.txt");
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    #[test]
    fn estimate_vasicek_hand_value() {
        let dir = tempfile::tempdir().unwrap();
        let f = sample_file(&dir, "# four points\n0\n1\n2\n3\n");
        let (code, out, _) = call(&["estimate", &f, "--estimator", "vasicek", "--m", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1.0397208\n");
    }

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let one = sample_file(&dir, "1.5\n");
        assert_eq!(call(&["estimate", &one, "--estimator", "kernel"]).0, 3);
        let bad = sample_file(&dir, "1\nabc\n2\n");
        let (code, _, err) = call(&["estimate", &bad, "--estimator", "kernel"]);
        assert_eq!(code, 3);
        assert!(err.contains("line 2"));
        let tied = sample_file(&dir, "1\n1\n1\n1\n2\n");
        assert_eq!(call(&["estimate", &tied, "--estimator", "vasicek", "--m", "1"]).0, 4);
        assert_eq!(call(&["estimate", &tied, "--estimator", "vasicek"]).0, 2);
        assert_eq!(call(&["estimate", &tied, "--estimator", "nope"]).0, 2);
        assert_eq!(call(&["simulate", "--dist", "normal", "--n", "10", "--reps", "5"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["--version"]).0, 0);
    }

    #[test]
    fn simulate_embeds_metadata_and_is_thread_independent() {
        let args = [
            "simulate", "--dist", "normal(0,1)", "--n", "20", "--reps", "40", "--estimators",
            "vasicek,wg,kernel", "--m", "3", "--h", "0.081", "--seed", "5", "--format", "csv",
        ];
        let (code, one, _) = call(&[&["--threads", "1"], &args[..]].concat());
        assert_eq!(code, 0);
        let (_, four, _) = call(&[&["--threads", "4"], &args[..]].concat());
        assert_eq!(one, four);
        assert!(one.contains("# seed: 5"));
        assert!(one.contains("# qdf-entropy "));
        assert_eq!(crate::harness::parse_csv_table(&one).unwrap().len(), 3);
    }

    #[test]
    fn calibrate_then_test_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let table = dir.path().join("crit.csv");
        let t = table.to_string_lossy();
        let (code, _, err) = call(&[
            "calibrate", "--n", "20", "--alpha", "0.05", "--reps", "1000", "--h", "0.081",
            "--seed", "3", "--output", &t,
        ]);
        assert_eq!(code, 0, "{err}");
        let loaded = CriticalValueTable::load(&table).unwrap();
        assert_eq!(loaded.entries().len(), 1);
        let values: String = (1..=20).map(|i| format!("{}\n", (i as f64 / 21.0).powi(4))).collect();
        let f = sample_file(&dir, &values);
        let (code, out, _) = call(&["test", &f, "--critical", &t, "--alpha", "0.05"]);
        assert_eq!(code, 0);
        assert!(out.contains("decision: reject normality"), "{out}");
        assert_eq!(call(&["test", &f, "--critical", &t, "--alpha", "0.01"]).0, 3);
    }
}
