// Kernel quantile-density estimate and the trimmed entropy estimate
// built on it.

use qdf_entropy::kernel::QdfCurve;
use qdf_entropy::{entropy_hat, Distribution, KernelConfig, RngStream};

pub struct KernelRun {
    pub estimate: f64,
    pub truth: f64,
    pub curve: QdfCurve,
}

pub fn run_example() -> qdf_entropy::Result<KernelRun> {
    let d = Distribution::standard_normal();
    let x = d.sample(200, &mut RngStream::new(11, 0))?;
    let cfg = KernelConfig::new(0.02)?;
    Ok(KernelRun {
        estimate: entropy_hat(&x, &cfg)?.value,
        truth: d.true_entropy(),
        curve: QdfCurve::evaluate(&x, &cfg, 9)?,
    })
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    let run = run_example()?;
    println!("entropy estimate {:.6}, truth {:.6}", run.estimate, run.truth);
    println!("     t    q_hat(t)");
    for (t, q) in run.curve.t.iter().zip(&run.curve.q) {
        println!("{t:6.3}  {q:10.5}");
    }
    Ok(())
}
