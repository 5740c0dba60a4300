// A built-in Monte-Carlo plan: five estimators on the same normal
// samples, rendered as a text table.

use qdf_entropy::harness::{assemble_table, builtin_plan, run_experiment, McReport, TableFormat};

pub fn run_example() -> qdf_entropy::Result<(Vec<McReport>, String)> {
    let plan = builtin_plan("2", 500, 42)?;
    let reports = run_experiment(&plan)?;
    let text = assemble_table(&plan, &reports, TableFormat::Text);
    Ok((reports, text))
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    print!("{}", run_example()?.1);
    Ok(())
}
