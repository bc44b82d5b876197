use rayon::prelude::*;

use crate::error::{check_len, domain, Result};
use crate::groups::sample_rotation;
use crate::linalg::{dot, Matrix};
use crate::rng::SeededStream;
use crate::scalar::Real;

use super::mean_var;

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<F> {
    pub estimate: F,
    pub std_error: F,
    pub samples: usize,
}

fn check_inputs<F: Real>(a: &Matrix<F>, x: &[F], y: &[F]) -> Result<()> {
    if !a.is_square() {
        return domain("A must be square");
    }
    let tol = F::lit(1e-10).max(F::epsilon() * F::lit(100.0));
    if !a.is_symmetric(tol) {
        return domain("A must be symmetric");
    }
    check_len(a.rows(), x.len())?;
    check_len(a.rows(), y.len())
}

/// Haar average of `(Mx)ᵀ A (My)` over `SO(n)`: `(tr A / n) ⟨x, y⟩`.
pub fn rotation_bilinear_exact<F: Real>(a: &Matrix<F>, x: &[F], y: &[F]) -> Result<F> {
    check_inputs(a, x, y)?;
    Ok(a.trace() / F::from_usize_lossy(a.rows()) * dot(x, y))
}

/// Monte Carlo estimate of the same average from `samples` Haar rotations;
/// rotation `k` is drawn from `stream.child(k)`.
pub fn rotation_bilinear_mc<F: Real>(
    a: &Matrix<F>,
    x: &[F],
    y: &[F],
    samples: usize,
    stream: &SeededStream,
) -> Result<McEstimate<F>> {
    check_inputs(a, x, y)?;
    if samples < 2 {
        return domain("rotation_bilinear_mc needs at least 2 samples");
    }
    let n = a.rows();
    let values: Vec<F> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut s = stream.child(k);
            let m = sample_rotation::<F>(n, &mut s)?;
            let mx = m.matrix().mul_vec(x)?;
            let my = m.matrix().mul_vec(y)?;
            a.bilinear(&mx, &my)
        })
        .collect::<Result<_>>()?;
    let (mean, var) = mean_var(&values);
    Ok(McEstimate {
        estimate: mean,
        std_error: (var / F::from_usize_lossy(samples)).sqrt(),
        samples,
    })
}
