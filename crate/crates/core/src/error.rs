use thiserror::Error;

/// Errors raised by the estimators, samplers and the test procedure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} is outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample must contain at least {min} finite values, got {got}")]
    SampleTooSmall { min: usize, got: usize },

    #[error("sample contains a non-finite value at position {index}")]
    NonFiniteValue { index: usize },

    #[error("window m = {m} is invalid for n = {n} (need 1 <= m <= n/2)")]
    InvalidWindow { m: usize, n: usize },

    #[error("degenerate spacings at order statistic {index}: non-positive log argument")]
    DegenerateSpacings { index: usize },

    #[error("estimated cdf is not monotone near order statistic {index}")]
    MalformedCdf { index: usize },

    #[error("quantile density estimate is non-positive at t = {t} (value {value})")]
    NonPositiveQdf { t: f64, value: f64 },

    #[error("quadrature did not converge: last change {change:e} above tolerance {tolerance:e} with {nodes} nodes")]
    QuadratureNotConverged {
        change: f64,
        tolerance: f64,
        nodes: usize,
    },

    #[error("quantile density curvature vanishes at t = {t}; AMSE bandwidth undefined")]
    SingularCurvature { t: f64 },

    #[error("sample has zero variance")]
    DegenerateSample,

    #[error("no critical value calibrated for n = {n}, alpha = {alpha}")]
    MissingCalibration { n: usize, alpha: f64 },

    #[error("every bandwidth candidate was disqualified")]
    NoViableBandwidth,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    /// True for failures of the numerical procedure itself (as opposed to
    /// malformed input or configuration).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSpacings { .. }
                | Error::MalformedCdf { .. }
                | Error::NonPositiveQdf { .. }
                | Error::QuadratureNotConverged { .. }
                | Error::SingularCurvature { .. }
                | Error::DegenerateSample
                | Error::NoViableBandwidth
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
