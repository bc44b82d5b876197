use crate::error::{check_len, domain, Result};
use crate::scalar::Real;

/// Linear statistic `T(x) = Σ θ_i x_i` with unit-norm weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStatistic<F> {
    weights: Vec<F>,
}

impl<F: Real> WeightedStatistic<F> {
    /// Requires `Σθ_i² = 1` within `1e-10`.
    pub fn new(weights: Vec<F>) -> Result<Self> {
        if weights.is_empty() {
            return domain("weights must be non-empty");
        }
        let ss: F = weights.iter().map(|&w| w * w).sum();
        let tol = F::lit(1e-10).max(F::epsilon() * F::from_usize_lossy(8 * weights.len()));
        if (ss - F::one()).abs() > tol {
            return domain(format!("weights must satisfy sum of squares = 1, got {ss}"));
        }
        Ok(WeightedStatistic { weights })
    }

    /// `θ_i = n^{-1/2}`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("weights must be non-empty");
        }
        let w = F::from_usize_lossy(n).sqrt().recip();
        Ok(WeightedStatistic { weights: vec![w; n] })
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Lipschitz constant `c_n = max|θ_i|`.
    pub fn lipschitz(&self) -> F {
        self.weights.iter().fold(F::zero(), |a, &w| a.max(w.abs()))
    }

    /// `Σ|θ_i|³`.
    pub fn cubic_sum(&self) -> F {
        self.weights.iter().map(|&w| w.abs().powi(3)).sum()
    }

    pub fn evaluate(&self, x: &[F]) -> Result<F> {
        weighted_sum(x, self)
    }
}

pub fn weighted_sum<F: Real>(x: &[F], stat: &WeightedStatistic<F>) -> Result<F> {
    check_len(stat.weights.len(), x.len())?;
    Ok(x.iter().zip(&stat.weights).map(|(&a, &w)| a * w).sum())
}

/// Mean of the first `n` coordinates minus mean of the last `m`.
pub fn mean_diff<F: Real>(x: &[F], n: usize, m: usize) -> Result<F> {
    check_len(n + m, x.len())?;
    if n == 0 || m == 0 {
        return domain("both groups must be non-empty");
    }
    Ok(super::mean_var(&x[..n]).0 - super::mean_var(&x[n..]).0)
}
