use crate::error::{domain, Result};
use crate::lpball::Exponent;
use crate::scalar::Real;

/// `|Σx_i| / (K n^{1/2 − 1/p} √(ln ln n))` with `K = 2^{1/2 + 1/p}`.
///
/// Depends on `x` only through its sum and length. Needs `n ≥ 3` so that
/// `ln ln n > 0`.
pub fn lil_ratio<F: Real>(x: &[F], p: Exponent<F>) -> Result<F> {
    let n = x.len();
    if n < 3 {
        return domain(format!("lil_ratio needs n >= 3, got {n}"));
    }
    let inv_p = p.reciprocal();
    let half = F::lit(0.5);
    let nf = F::from_usize_lossy(n);
    let k = F::lit(2.0).powf(half + inv_p);
    let denom = k * nf.powf(half - inv_p) * nf.ln().ln().sqrt();
    Ok(x.iter().copied().sum::<F>().abs() / denom)
}
