// Choosing the kernel bandwidth: the analytic AMSE rule and a Monte-Carlo
// grid search on the entropy MSE.

use qdf_entropy::bandwidth::{grid_search_h, median_amse_h, BandwidthGrid, BandwidthSearch};
use qdf_entropy::{Distribution, KernelConfig};

pub struct BandwidthChoice {
    pub amse_normal: f64,
    pub amse_exponential: f64,
    pub search: BandwidthSearch,
}

pub fn run_example() -> qdf_entropy::Result<BandwidthChoice> {
    let normal = Distribution::standard_normal();
    let grid: BandwidthGrid = "0.01:0.5:8".parse()?;
    let search = grid_search_h(&normal, 50, &KernelConfig::new(0.1)?, &grid, 200, 5)?;
    Ok(BandwidthChoice {
        amse_normal: median_amse_h(&normal, 50)?,
        amse_exponential: median_amse_h(&Distribution::exponential(1.0)?, 50)?,
        search,
    })
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    let c = run_example()?;
    println!("AMSE rule at n = 50: normal {:.4}, exponential {:.4}", c.amse_normal, c.amse_exponential);
    println!("        h          mse  failures");
    for p in &c.search.curve {
        println!("{:9.5}  {:11.6}  {:8}", p.h, p.mse, p.failures);
    }
    println!("grid minimiser h* = {:.5}", c.search.h_star);
    Ok(())
}
