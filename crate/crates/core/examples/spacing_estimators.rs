// The six spacing and cdf based entropy estimators on one normal sample.

use qdf_entropy::{Distribution, EstimatorId, RngStream, SpacingConfig};

pub fn run_example() -> qdf_entropy::Result<Vec<(EstimatorId, f64)>> {
    let x = Distribution::standard_normal().sample(50, &mut RngStream::new(2024, 0))?;
    let cfg = SpacingConfig::new(SpacingConfig::default_window(x.len()));
    EstimatorId::ALL
        .into_iter()
        .filter(|id| id.is_spacing())
        .map(|id| Ok((id, cfg.estimate(id, &x)?.value)))
        .collect()
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    println!("n = 50, m = 4, true entropy {:.6}", Distribution::standard_normal().true_entropy());
    for (id, value) in run_example()? {
        println!("{id:<12} {value:.6}");
    }
    Ok(())
}
