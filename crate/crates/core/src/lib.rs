//! Differential entropy estimation from kernel-smoothed quantile densities,
//! the classical spacing estimators it is compared with, and an
//! entropy-based test of normality.

pub mod bandwidth;
pub mod cli;
pub mod dist;
pub mod error;
pub mod estimate;
pub mod harness;
pub mod kernel;
pub mod normality;
pub mod numfmt;
pub mod parzen;
pub mod quad;
pub mod rng;
pub mod sample;
pub mod spacing;
pub mod special;

pub use dist::Distribution;
pub use error::{Error, Result};
pub use estimate::{EntropyEstimate, EstimatorId, Tuning};
pub use kernel::{entropy_hat, KernelConfig};
pub use rng::RngStream;
pub use sample::Sample;
pub use spacing::SpacingConfig;
