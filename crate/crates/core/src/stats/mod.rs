//! Test statistics, parametric t-tests, the randomization engine and the
//! auxiliary models used by the simulation studies.

mod bilinear;
mod emgd;
mod lil;
mod model;
mod randomization;
mod statistic;
mod ttest;

pub use bilinear::{rotation_bilinear_exact, rotation_bilinear_mc, McEstimate};
pub use emgd::{emgd_sample, EmgdModel};
pub use lil::lil_ratio;
pub use model::TwoSampleModel;
pub use randomization::{
    randomization_pvalue, randomization_test, randomization_threshold, Alternative,
    RandomizationOptions, RandomizationOutcome, Reference,
};
pub use statistic::{mean_diff, weighted_sum, WeightedStatistic};
pub use ttest::{one_sample_t, two_sample_t, TTest, VarianceModel};

use crate::scalar::Real;

/// Sample mean and unbiased variance, shifted by the first element so that
/// constant input gives exactly zero variance.
pub(crate) fn mean_var<F: Real>(x: &[F]) -> (F, F) {
    let n = x.len();
    if n == 0 {
        return (F::nan(), F::nan());
    }
    let shift = x[0];
    let nf = F::from_usize_lossy(n);
    let mean = shift + x.iter().map(|&v| v - shift).sum::<F>() / nf;
    if n < 2 {
        return (mean, F::zero());
    }
    let ss: F = x.iter().map(|&v| (v - mean) * (v - mean)).sum();
    (mean, ss / (nf - F::one()))
}

/// Sample third absolute central moment `n⁻¹ Σ|x_i − x̄|³`.
pub fn third_abs_central_moment<F: Real>(x: &[F]) -> F {
    let (mean, _) = mean_var(x);
    x.iter().map(|&v| (v - mean).abs().powi(3)).sum::<F>() / F::from_usize_lossy(x.len())
}

/// Sample standard deviation (denominator `n − 1`).
pub fn sample_sd<F: Real>(x: &[F]) -> F {
    mean_var(x).1.sqrt()
}
