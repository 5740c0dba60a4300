// Parzen-type entropy of the standardized variable under a normal
// location-scale null, from the kernel and the raw sample quantile.

use qdf_entropy::parzen::{parzen_entropy_star, parzen_entropy_tilde, LocationScaleNull};
use qdf_entropy::{Distribution, KernelConfig, RngStream};

pub struct ParzenRun {
    pub star_normal: f64,
    pub star_exponential: f64,
    pub tilde_normal: f64,
}

pub fn run_example() -> qdf_entropy::Result<ParzenRun> {
    let null = LocationScaleNull::normal();
    let cfg = KernelConfig::new(0.02)?;
    let normal = Distribution::standard_normal().sample(400, &mut RngStream::new(8, 0))?;
    let expo = Distribution::exponential(1.0)?.sample(400, &mut RngStream::new(8, 1))?;
    Ok(ParzenRun {
        star_normal: parzen_entropy_star(&normal, &null, &cfg)?.value,
        star_exponential: parzen_entropy_star(&expo, &null, &cfg)?.value,
        tilde_normal: parzen_entropy_tilde(&normal, &null, 0.01)?.value,
    })
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    let r = run_example()?;
    println!("kernel version, normal data      {:+.5}", r.star_normal);
    println!("kernel version, exponential data {:+.5}", r.star_exponential);
    println!("raw-quantile version, normal     {:+.5}", r.tilde_normal);
    Ok(())
}
