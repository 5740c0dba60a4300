// Digamma, log-gamma and the Euler constant that enter the spacing
// estimators' bias corrections.

use qdf_entropy::special::{digamma, euler_gamma, ln_beta, ln_gamma};

pub struct SpecialValues {
    pub digamma_one: f64,
    pub digamma_ten: f64,
    pub ln_gamma_half: f64,
    pub ln_beta_two_three: f64,
}

pub fn run_example() -> qdf_entropy::Result<SpecialValues> {
    Ok(SpecialValues {
        digamma_one: digamma(1.0)?,
        digamma_ten: digamma(10.0)?,
        ln_gamma_half: ln_gamma(0.5)?,
        ln_beta_two_three: ln_beta(2.0, 3.0)?,
    })
}

#[allow(dead_code)]
fn main() -> qdf_entropy::Result<()> {
    let v = run_example()?;
    println!("psi(1)       = {:.15} (-gamma = {:.15})", v.digamma_one, -euler_gamma());
    println!("psi(10)      = {:.15}", v.digamma_ten);
    println!("ln Gamma(.5) = {:.15}", v.ln_gamma_half);
    println!("ln B(2, 3)   = {:.15}", v.ln_beta_two_three);
    Ok(())
}
