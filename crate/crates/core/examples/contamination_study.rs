// Robustness to contamination, driven by a TOML plan: normal data with
// 10% of the draws replaced by uniform ones, scored against the clean
// normal entropy.

use qdf_entropy::harness::{assemble_table, run_contamination, ExperimentPlan, McReport, TableFormat};

const PLAN: &str = r#"
name = "contaminated-normal"
distribution = "normal(0,1)"
n = 50
replications = 300
seed = 17

[contamination]
contaminant = "uniform"
eps = 0.10

[[estimators]]
estimator = "vasicek"
m = 4

[[estimators]]
estimator = "wg"
m = 4

[[estimators]]
estimator = "kernel"
h = 0.0333
"#;

pub fn run_example() -> qdf_entropy::Result<(Vec<McReport>, String)> {
    let plan = ExperimentPlan::from_toml(PLAN)?;
    let reports = run_contamination(&plan)?;
    let csv = assemble_table(&plan, &reports, TableFormat::Csv);
    Ok((reports, csv))
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    print!("{}", run_example()?.1);
    Ok(())
}
