//! Closed-form bounds: Berry–Esseen for weighted sign-flip sums,
//! Lévy–Prokhorov distances between centred Gaussians and for the permuted
//! two-sample statistic, the exact Gaussian-mixture law of the permuted
//! statistic, symmetric KL and total variation, and the `SO(n)` tail.

use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::special::{lambert_w0, log_hypergeom_weight, normal_sf};
use crate::stats::TwoSampleModel;

/// Default Berry–Esseen constant.
pub const BERRY_ESSEEN_C: f64 = 0.56;

/// `2 C ω σ⁻³ Σ|θ_i|³`.
pub fn berry_esseen_one_sample<F: Real>(sigma: F, omega: F, theta: &[F], c: F) -> Result<F> {
    if !(sigma > F::zero()) {
        return domain(format!("sigma must be positive, got {sigma}"));
    }
    if !(omega >= F::zero()) {
        return domain(format!("omega must be non-negative, got {omega}"));
    }
    if !(c > F::zero()) {
        return domain(format!("constant C must be positive, got {c}"));
    }
    let cubic: F = theta.iter().map(|&t| t.abs().powi(3)).sum();
    Ok(F::lit(2.0) * c * omega / sigma.powi(3) * cubic)
}

/// Evaluation mode for [`lp_gaussian_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpMode {
    /// `√(2Δ W(1/√(2πΔ)))`.
    LambertExact,
    /// `√(2Δ ln(1/√(2πΔ) + 1))`, using `W(z) ≤ ln(z + 1)`.
    LogUpper,
}

fn check_var<F: Real>(v: F, name: &str) -> Result<()> {
    if !(v > F::zero()) || !v.is_finite() {
        return domain(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

/// Lévy–Prokhorov bound between `N(0, var1)` and `N(0, var2)`.
pub fn lp_gaussian_bound<F: Real>(var1: F, var2: F, mode: LpMode) -> Result<F> {
    check_var(var1, "var1")?;
    check_var(var2, "var2")?;
    let delta = (var1 - var2).abs();
    if delta == F::zero() {
        return Ok(F::zero());
    }
    let two = F::lit(2.0);
    let z = (two * F::PI() * delta).sqrt().recip();
    let w = match mode {
        LpMode::LambertExact => lambert_w0(z)?,
        LpMode::LogUpper => z.ln_1p(),
    };
    Ok((two * delta * w).sqrt())
}

/// Lévy–Prokhorov bound between the law of the difference of means and its
/// permutation average:
/// `√(2 (1/m − 1/n) Δ ln(nm / √(n² − m²) / √(2πΔ) + 1))`, `Δ = |var1 − var2|`.
///
/// Group sizes are reordered so that `n ≥ m`; the value is 0 when `n = m`
/// or the variances agree.
pub fn two_sample_lp_bound<F: Real>(n: usize, m: usize, var1: F, var2: F) -> Result<F> {
    check_var(var1, "var1")?;
    check_var(var2, "var2")?;
    if n == 0 || m == 0 {
        return domain("group sizes must be >= 1");
    }
    let (n, m) = if n >= m { (n, m) } else { (m, n) };
    let delta = (var1 - var2).abs();
    if n == m || delta == F::zero() {
        return Ok(F::zero());
    }
    let nf = F::from_usize_lossy(n);
    let mf = F::from_usize_lossy(m);
    let two = F::lit(2.0);
    let scale = nf * mf / (nf * nf - mf * mf).sqrt();
    let arg = scale / (two * F::PI() * delta).sqrt();
    Ok((two * (mf.recip() - nf.recip()) * delta * arg.ln_1p()).sqrt())
}

/// Law of `T(π X)` for Gaussian two-sample data and uniform `π ∈ S_{n+m}`:
/// component `j` (j of the `m` second-group slots hold first-group draws) is
/// `N(0, s_j²)` with weight `C(n,j) C(m,m−j) / C(n+m,m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureNull<F> {
    weights: Vec<F>,
    component_sd: Vec<F>,
}

impl<F: Real> GaussianMixtureNull<F> {
    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn component_sd(&self) -> &[F] {
        &self.component_sd
    }

    pub fn component_variances(&self) -> Vec<F> {
        self.component_sd.iter().map(|&s| s * s).collect()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Builds the mixture for a model with `n ≥ m`.
///
/// `s_j² = var1/n + var2/m + j (1/m² − 1/n²)(var1 − var2)` for `j = 0..=m`.
pub fn mixture_null<F: Real>(model: &TwoSampleModel<F>) -> Result<GaussianMixtureNull<F>> {
    let (n, m) = (model.n, model.m);
    if m > n {
        return domain(format!("mixture_null requires n >= m, got n={n}, m={m}; orient the model first"));
    }
    let nf = F::from_usize_lossy(n);
    let mf = F::from_usize_lossy(m);
    let base = model.mean_diff_variance();
    let slope = ((mf * mf).recip() - (nf * nf).recip()) * (model.var1 - model.var2);
    let mut weights = Vec::with_capacity(m + 1);
    let mut component_sd = Vec::with_capacity(m + 1);
    for j in 0..=m {
        weights.push(log_hypergeom_weight::<F>(j as u64, n as u64, m as u64)?.exp());
        let var = base + F::from_usize_lossy(j) * slope;
        component_sd.push(var.sqrt());
    }
    let total: F = weights.iter().copied().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(GaussianMixtureNull { weights, component_sd })
}

/// `Σ_j w_j (1 − Φ(t / s_j))`.
pub fn mixture_tail<F: Real>(null: &GaussianMixtureNull<F>, t: F) -> F {
    null.weights
        .iter()
        .zip(&null.component_sd)
        .map(|(&w, &s)| w * normal_sf(t / s))
        .sum()
}

/// Symmetric KL divergence between `N(0, var1)` and `N(0, var2)`:
/// `¼ (σ₁/σ₂ − σ₂/σ₁)²`.
pub fn symmetric_kl_gaussian<F: Real>(var1: F, var2: F) -> Result<F> {
    check_var(var1, "var1")?;
    check_var(var2, "var2")?;
    let r = (var1 / var2).sqrt();
    let d = r - r.recip();
    Ok(F::lit(0.25) * d * d)
}

/// Total-variation bound between the law of the difference of means and its
/// permutation average, clamped to 1:
/// `½ √((n−m)/(n+m)) |var2 − var1|^{1/2} max{(var1+var2)^{-1/2}, (2 var2)^{-1/2}}`.
pub fn tv_bound<F: Real>(model: &TwoSampleModel<F>) -> F {
    let m = model.oriented();
    let nf = F::from_usize_lossy(m.n);
    let mf = F::from_usize_lossy(m.m);
    let delta = (m.var2 - m.var1).abs();
    if m.n == m.m || delta == F::zero() {
        return F::zero();
    }
    let half = F::lit(0.5);
    let factor = (m.var1 + m.var2)
        .recip()
        .sqrt()
        .max((F::lit(2.0) * m.var2).recip().sqrt());
    let value = half * ((nf - mf) / (nf + mf)).sqrt() * delta.sqrt() * factor;
    value.min(F::one())
}

/// Constants of the `SO(n)` sub-Gaussian tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SOnTailParams<F> {
    kappa0: F,
    prefactor: F,
}

impl<F: Real> Default for SOnTailParams<F> {
    fn default() -> Self {
        SOnTailParams {
            kappa0: F::lit(1.0 / 72.0),
            prefactor: F::one(),
        }
    }
}

impl<F: Real> SOnTailParams<F> {
    pub fn new(kappa0: F, prefactor: F) -> Result<Self> {
        if !(kappa0 > F::zero()) {
            return domain("kappa0 must be positive");
        }
        if !(prefactor >= F::one()) {
            return domain("prefactor must be >= 1");
        }
        Ok(SOnTailParams { kappa0, prefactor })
    }

    pub fn kappa0(&self) -> F {
        self.kappa0
    }

    pub fn prefactor(&self) -> F {
        self.prefactor
    }
}

/// `min(1, K exp(−κ₀ t² / (c_n² ‖x‖₂²)))`.
pub fn so_n_tail<F: Real>(t: F, c_n: F, norm_x: F, params: &SOnTailParams<F>) -> Result<F> {
    if !(c_n > F::zero()) || !(norm_x > F::zero()) {
        return domain("c_n and norm_x must be positive");
    }
    let scale = c_n * norm_x;
    let v = params.prefactor * (-params.kappa0 * t * t / (scale * scale)).exp();
    Ok(v.min(F::one()))
}
