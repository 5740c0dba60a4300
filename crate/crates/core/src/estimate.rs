use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::kernel::KernelConfig;
use crate::spacing::SpacingConfig;

/// Identifies an entropy estimator. The text form is the id accepted on
/// the command line and in plan files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EstimatorId {
    Vasicek,
    VanEs,
    Correa,
    Wieczorkowski,
    Ebrahimi,
    Yousefzadeh,
    Kernel,
    ParzenStar,
    ParzenTilde,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 9] = [
        EstimatorId::Vasicek,
        EstimatorId::VanEs,
        EstimatorId::Correa,
        EstimatorId::Wieczorkowski,
        EstimatorId::Ebrahimi,
        EstimatorId::Yousefzadeh,
        EstimatorId::Kernel,
        EstimatorId::ParzenStar,
        EstimatorId::ParzenTilde,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorId::Vasicek => "vasicek",
            EstimatorId::VanEs => "vanes",
            EstimatorId::Correa => "correa",
            EstimatorId::Wieczorkowski => "wg",
            EstimatorId::Ebrahimi => "ebrahimi",
            EstimatorId::Yousefzadeh => "yousefzadeh",
            EstimatorId::Kernel => "kernel",
            EstimatorId::ParzenStar => "parzen-star",
            EstimatorId::ParzenTilde => "parzen-tilde",
        }
    }

    /// Estimators driven by a spacing window `m`.
    pub fn is_spacing(self) -> bool {
        matches!(
            self,
            EstimatorId::Vasicek
                | EstimatorId::VanEs
                | EstimatorId::Correa
                | EstimatorId::Wieczorkowski
                | EstimatorId::Ebrahimi
                | EstimatorId::Yousefzadeh
        )
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim().to_ascii_lowercase();
        EstimatorId::ALL
            .into_iter()
            .find(|id| id.as_str() == key)
            .ok_or_else(|| Error::Parse(format!("unknown estimator `{s}`")))
    }
}

impl TryFrom<String> for EstimatorId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<EstimatorId> for String {
    fn from(id: EstimatorId) -> String {
        id.as_str().to_string()
    }
}

/// Tuning that produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tuning {
    Spacing(SpacingConfig),
    Kernel(KernelConfig),
    /// Trimming level only (sample-quantile based estimators).
    Trim { eps: f64 },
}

/// A differential entropy estimate in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub estimator: EstimatorId,
    pub n: usize,
    pub tuning: Tuning,
}
