// Rejection rate of the normality test against non-normal alternatives.

use qdf_entropy::harness::power_alternatives;
use qdf_entropy::normality::{calibrate_critical_values, power_study};
use qdf_entropy::{Distribution, KernelConfig};

pub fn run_example() -> qdf_entropy::Result<Vec<(Distribution, f64)>> {
    let table = calibrate_critical_values(&[50], &[0.05], 2000, 0.01, 3, |_| Ok(0.0333))?;
    let base = table.entry(50, 0.05)?.kernel_config()?;
    power_alternatives()
        .into_iter()
        .map(|(d, h)| {
            let cfg = KernelConfig { h, ..base };
            Ok((d, power_study(&d, 50, 0.05, 500, &table, &cfg, 4)?))
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    println!("power at n = 50, alpha = 0.05, 500 replications");
    for (d, p) in run_example()? {
        println!("{:<16} {p:.3}", d.to_string());
    }
    Ok(())
}
