//! Composite Simpson quadrature on a uniform grid, refined by halving the
//! step until two successive estimates agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Nodes of the first grid; must be odd and at least 3.
    pub initial_nodes: usize,
    /// Refinement stops with an error rather than exceed this many nodes.
    pub node_budget: usize,
    /// Absolute change between successive estimates that counts as converged.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_nodes: 129,
            node_budget: 4097,
            tolerance: 1e-8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_nodes < 3 || self.initial_nodes % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "initial quadrature nodes must be odd and >= 3, got {}",
                self.initial_nodes
            )));
        }
        if self.node_budget < self.initial_nodes {
            return Err(Error::InvalidParameter(format!(
                "node budget {} is below the initial grid {}",
                self.node_budget, self.initial_nodes
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Nodes used by the accepted estimate.
    pub nodes: usize,
}

fn simpson_sum(values: &[f64], step: f64) -> f64 {
    let last = values.len() - 1;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (k, v) in values.iter().enumerate().take(last).skip(1) {
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    step / 3.0 * (values[0] + values[last] + 4.0 * odd + 2.0 * even)
}

/// Integrates `f` over `[a, b]`. Function values are reused across
/// refinements, so each halving only evaluates the new midpoints.
pub fn simpson<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let mut intervals = cfg.initial_nodes - 1;
    let node = |k: usize, intervals: usize| a + (b - a) * k as f64 / intervals as f64;
    let mut values = (0..=intervals)
        .map(|k| f(node(k, intervals)))
        .collect::<Result<Vec<f64>>>()?;
    let mut estimate = simpson_sum(&values, (b - a) / intervals as f64);
    let mut change = f64::INFINITY;
    while 2 * intervals < cfg.node_budget {
        let finer = 2 * intervals;
        let mut next = Vec::with_capacity(finer + 1);
        for (k, v) in values.iter().enumerate() {
            if k > 0 {
                next.push(f(node(2 * k - 1, finer))?);
            }
            next.push(*v);
        }
        values = next;
        intervals = finer;
        let refined = simpson_sum(&values, (b - a) / intervals as f64);
        change = (refined - estimate).abs();
        estimate = refined;
        if change < cfg.tolerance {
            return Ok(Integral {
                value: estimate,
                nodes: intervals + 1,
            });
        }
    }
    Err(Error::QuadratureNotConverged {
        change,
        tolerance: cfg.tolerance,
        nodes: intervals + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cubic_is_exact_after_one_refinement() {
        let cfg = QuadratureConfig {
            initial_nodes: 3,
            ..Default::default()
        };
        let r = simpson(|x| Ok(x * x * x - x), 0.0, 2.0, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-14);
        assert_eq!(r.nodes, 5);
    }

    #[test]
    fn smooth_integrand_converges() {
        let r = simpson(|x: f64| Ok(x.sin()), 0.0, std::f64::consts::PI, &Default::default()).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadratureConfig {
            initial_nodes: 3,
            node_budget: 17,
            tolerance: 1e-15,
        };
        let err = simpson(|x: f64| Ok((40.0 * x).sin().abs()), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { nodes: 17, .. }));
    }

    #[test]
    fn evaluates_each_node_once() {
        let mut calls = 0;
        let cfg = QuadratureConfig {
            initial_nodes: 5,
            node_budget: 33,
            tolerance: 1e-300,
        };
        let _ = simpson(
            |x: f64| {
                calls += 1;
                Ok(x.exp())
            },
            0.0,
            1.0,
            &cfg,
        );
        assert_eq!(calls, 33);
    }

    #[test]
    fn propagates_integrand_errors() {
        let err = simpson(|_| Err(Error::DegenerateSample), 0.0, 1.0, &Default::default()).unwrap_err();
        assert_eq!(err, Error::DegenerateSample);
    }

    #[test]
    fn rejects_bad_configuration() {
        let even = QuadratureConfig {
            initial_nodes: 4,
            ..Default::default()
        };
        assert!(even.validate().is_err());
        let zero_tol = QuadratureConfig {
            tolerance: 0.0,
            ..Default::default()
        };
        assert!(zero_tol.validate().is_err());
    }
}
