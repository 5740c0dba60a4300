use crate::error::{Error, Result};

/// A univariate sample together with its order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub const MIN_LEN: usize = 2;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < Self::MIN_LEN {
            return Err(Error::SampleTooSmall {
                min: Self::MIN_LEN,
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics X(1) <= ... <= X(n).
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Order statistic X(i) with 1-based `i`, clamped to [1, n].
    pub fn order_stat(&self, i: isize) -> f64 {
        let n = self.sorted.len() as isize;
        self.sorted[(i.clamp(1, n) - 1) as usize]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Variance with divisor n.
    pub fn population_variance(&self) -> f64 {
        let mean = self.mean();
        self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / self.len() as f64
    }

    /// Applies x -> a x + b to every value.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| a * v + b).collect())
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}
