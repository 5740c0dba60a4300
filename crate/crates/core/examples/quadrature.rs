// Composite Simpson rule with interval halving, as used for the
// log-qdf integral.

use qdf_entropy::quad::{simpson, Integral, QuadratureConfig};

pub fn run_example() -> qdf_entropy::Result<Integral> {
    let cfg = QuadratureConfig::default();
    simpson(|x| Ok((-x * x / 2.0).exp()), -6.0, 6.0, &cfg)
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    let r = run_example()?;
    println!(
        "integral of exp(-x^2/2) on [-6, 6] = {:.12} (sqrt(2 pi) = {:.12}) with {} nodes",
        r.value,
        (2.0 * std::f64::consts::PI).sqrt(),
        r.nodes
    );
    Ok(())
}
