use crate::error::{domain, Result};
use crate::rng::SeededStream;
use crate::scalar::Real;

/// Two independent Gaussian samples with a common mean: `n` draws with
/// variance `var1` followed by `m` draws with variance `var2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSampleModel<F> {
    pub n: usize,
    pub m: usize,
    pub var1: F,
    pub var2: F,
    pub mean: F,
}

impl<F: Real> TwoSampleModel<F> {
    pub fn new(n: usize, m: usize, var1: F, var2: F) -> Result<Self> {
        Self::with_mean(n, m, var1, var2, F::zero())
    }

    pub fn with_mean(n: usize, m: usize, var1: F, var2: F, mean: F) -> Result<Self> {
        if n == 0 || m == 0 {
            return domain("group sizes must be >= 1");
        }
        if !(var1 > F::zero()) || !(var2 > F::zero()) || !var1.is_finite() || !var2.is_finite() {
            return domain("variances must be positive and finite");
        }
        if !mean.is_finite() {
            return domain("mean must be finite");
        }
        Ok(TwoSampleModel { n, m, var1, var2, mean })
    }

    /// Same model with the larger group first.
    pub fn oriented(&self) -> Self {
        if self.n >= self.m {
            *self
        } else {
            TwoSampleModel {
                n: self.m,
                m: self.n,
                var1: self.var2,
                var2: self.var1,
                mean: self.mean,
            }
        }
    }

    /// Variance of the difference of group means.
    pub fn mean_diff_variance(&self) -> F {
        self.var1 / F::from_usize_lossy(self.n) + self.var2 / F::from_usize_lossy(self.m)
    }

    pub fn sample(&self, stream: &mut SeededStream) -> Vec<F> {
        let (sd1, sd2) = (self.var1.sqrt(), self.var2.sqrt());
        (0..self.n + self.m)
            .map(|i| {
                let sd = if i < self.n { sd1 } else { sd2 };
                self.mean + sd * stream.normal_as::<F>()
            })
            .collect()
    }
}
