//! Uniform sampling inside `ℓ_pⁿ` balls.
//!
//! For finite `p` a point is built from `n` i.i.d. variates with density
//! `∝ exp(-|t|^p)` and an independent standard exponential `Z`:
//! `X = Y / (Σ|Y_i|^p + Z)^{1/p}`. The exp-power variates come from a
//! ratio-of-uniforms sampler whose acceptance probability is known in
//! closed form.

use crate::error::{domain, Error, Result};
use crate::rng::SeededStream;
use crate::scalar::Real;
use crate::special::log_gamma_unchecked;

/// Upper bound on ratio-of-uniforms proposals for a single variate. With
/// acceptance above one half, reaching it means the stream is broken.
const MAX_PROPOSALS: usize = 1_000_000;

/// Norm exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<F> {
    Finite(F),
    Infinity,
}

impl<F: Real> Exponent<F> {
    pub fn finite(p: F) -> Result<Self> {
        if p.is_infinite() && p > F::zero() {
            return Ok(Exponent::Infinity);
        }
        if !(p >= F::one()) {
            return domain(format!("exponent must satisfy p >= 1, got {p}"));
        }
        Ok(Exponent::Finite(p))
    }

    /// `1/p`, zero at infinity.
    pub fn reciprocal(&self) -> F {
        match *self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinity => F::zero(),
        }
    }
}

/// Ball `{x ∈ ℝⁿ : ‖x‖_p ≤ r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBallSpec<F> {
    dimension: usize,
    exponent: Exponent<F>,
    radius: F,
}

impl<F: Real> LpBallSpec<F> {
    pub fn new(dimension: usize, exponent: Exponent<F>, radius: F) -> Result<Self> {
        if dimension == 0 {
            return domain("ball dimension must be >= 1");
        }
        if let Exponent::Finite(p) = exponent {
            Exponent::finite(p)?;
        }
        if !(radius > F::zero()) || !radius.is_finite() {
            return domain(format!("radius must be positive and finite, got {radius}"));
        }
        Ok(LpBallSpec {
            dimension,
            exponent,
            radius,
        })
    }

    /// Unit ball.
    pub fn unit(dimension: usize, exponent: Exponent<F>) -> Result<Self> {
        Self::new(dimension, exponent, F::one())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn exponent(&self) -> Exponent<F> {
        self.exponent
    }

    pub fn radius(&self) -> F {
        self.radius
    }

    /// `Σ|x_i/r|^p` (or `max|x_i|/r` for `p = ∞`); `≤ 1` inside the ball.
    pub fn gauge(&self, x: &[F]) -> F {
        match self.exponent {
            Exponent::Finite(p) => x.iter().map(|&v| (v / self.radius).abs().powf(p)).sum(),
            Exponent::Infinity => x
                .iter()
                .map(|&v| (v / self.radius).abs())
                .fold(F::zero(), F::max),
        }
    }

    pub fn contains(&self, x: &[F]) -> bool {
        x.len() == self.dimension && self.gauge(x) <= F::one()
    }
}

fn check_p<F: Real>(p: F) -> Result<()> {
    if !(p >= F::one()) || !p.is_finite() {
        return domain(format!("exp-power sampler requires finite p >= 1, got {p}"));
    }
    Ok(())
}

/// Ratio-of-uniforms sampler for the density `∝ exp(-|t|^p)`.
///
/// Proposals are `(U, V)` with `U ~ U(0,1]`, `V ~ U(-b, b)`,
/// `b = (2/(e p))^{1/p}`; `V/U` is accepted when `U² ≤ exp(-|V/U|^p)`.
#[derive(Debug, Clone, Copy)]
pub struct ExpPowerSampler<F> {
    p: F,
    half_width: F,
}

impl<F: Real> ExpPowerSampler<F> {
    pub fn new(p: F) -> Result<Self> {
        check_p(p)?;
        let half_width = (F::lit(2.0) / (F::E() * p)).powf(p.recip());
        Ok(ExpPowerSampler { p, half_width })
    }

    pub fn exponent(&self) -> F {
        self.p
    }

    /// Bound `b` on `|V|`.
    pub fn half_width(&self) -> F {
        self.half_width
    }

    /// One proposal; `Some` on acceptance.
    #[inline]
    pub fn propose(&self, stream: &mut SeededStream) -> Option<F> {
        let u = F::lit(stream.uniform_open0());
        let v = self.half_width * F::lit(2.0 * stream.uniform() - 1.0);
        let y = v / u;
        if u * u <= (-y.abs().powf(self.p)).exp() {
            Some(y)
        } else {
            None
        }
    }

    pub fn sample(&self, stream: &mut SeededStream) -> F {
        for _ in 0..MAX_PROPOSALS {
            if let Some(y) = self.propose(stream) {
                return y;
            }
        }
        panic!("ratio-of-uniforms exceeded {MAX_PROPOSALS} proposals; random stream is corrupt");
    }
}

/// One variate with density `∝ exp(-|t|^p)`.
pub fn sample_exp_power<F: Real>(p: F, stream: &mut SeededStream) -> Result<F> {
    Ok(ExpPowerSampler::new(p)?.sample(stream))
}

/// Probability that one ratio-of-uniforms proposal is accepted:
/// `Γ(1+1/p) (e p)^{1/p} / 2^{1+1/p}`.
pub fn acceptance_probability<F: Real>(p: F) -> Result<F> {
    if !(p >= F::one()) {
        return domain(format!("acceptance_probability requires p >= 1, got {p}"));
    }
    if p.is_infinite() {
        return Ok(F::lit(0.5));
    }
    let inv = p.recip();
    let ln = log_gamma_unchecked(F::one() + inv) + inv * (F::E() * p).ln()
        - (F::one() + inv) * F::LN_2();
    Ok(ln.exp())
}

/// How the exp-power coordinates are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordinateMethod {
    /// Ratio of uniforms for every `p`.
    #[default]
    RatioOfUniforms,
    /// Closed-form samplers for `p = 1` (Laplace) and `p = 2` (Gaussian with
    /// variance ½); other exponents fall back to ratio of uniforms. For
    /// cross-checks only.
    Direct,
}

fn direct_exp_power<F: Real>(p: F, sampler: &ExpPowerSampler<F>, stream: &mut SeededStream) -> F {
    if p == F::one() {
        let e = stream.standard_exponential();
        F::lit(if stream.coin() { -e } else { e })
    } else if p == F::lit(2.0) {
        F::lit(stream.standard_normal() * std::f64::consts::FRAC_1_SQRT_2)
    } else {
        sampler.sample(stream)
    }
}

/// Uniform point in the ball.
pub fn sample_lp_ball<F: Real>(spec: &LpBallSpec<F>, stream: &mut SeededStream) -> Vec<F> {
    sample_lp_ball_with(spec, CoordinateMethod::RatioOfUniforms, stream)
}

pub fn sample_lp_ball_with<F: Real>(
    spec: &LpBallSpec<F>,
    method: CoordinateMethod,
    stream: &mut SeededStream,
) -> Vec<F> {
    let n = spec.dimension;
    let r = spec.radius;
    let p = match spec.exponent {
        Exponent::Infinity => {
            return (0..n)
                .map(|_| r * F::lit(2.0 * stream.uniform() - 1.0))
                .collect();
        }
        Exponent::Finite(p) => p,
    };
    let sampler = ExpPowerSampler::new(p).expect("spec validated p >= 1");
    let y: Vec<F> = (0..n)
        .map(|_| match method {
            CoordinateMethod::RatioOfUniforms => sampler.sample(stream),
            CoordinateMethod::Direct => direct_exp_power(p, &sampler, stream),
        })
        .collect();
    let z = F::lit(stream.standard_exponential());
    let s: F = y.iter().map(|&v| v.abs().powf(p)).sum::<F>() + z;
    let scale = r / s.powf(p.recip());
    y.into_iter().map(|v| v * scale).collect()
}

/// `ln vol(B_p^n(r)) = n ln(2r) + n ln Γ(1+1/p) − ln Γ(1+n/p)`.
pub fn log_lp_ball_volume<F: Real>(spec: &LpBallSpec<F>) -> F {
    let n = F::from_usize_lossy(spec.dimension);
    let base = n * (F::lit(2.0) * spec.radius).ln();
    match spec.exponent {
        Exponent::Infinity => base,
        Exponent::Finite(p) => {
            let inv = p.recip();
            base + n * log_gamma_unchecked(F::one() + inv) - log_gamma_unchecked(F::one() + n * inv)
        }
    }
}

/// Volume of the ball; [`Error::Overflow`] when it is not representable.
pub fn lp_ball_volume<F: Real>(spec: &LpBallSpec<F>) -> Result<F> {
    let v = log_lp_ball_volume(spec).exp();
    if v.is_finite() && v > F::zero() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!(
            "volume out of range for n = {}; use log_lp_ball_volume",
            spec.dimension
        )))
    }
}

/// Exact `E X₁²` for the uniform unit-ball law, `p ∈ {1, 2}`.
pub fn lp_ball_second_moment<F: Real>(n: usize, p: F) -> Result<F> {
    if n == 0 {
        return domain("dimension must be >= 1");
    }
    let nf = F::from_usize_lossy(n);
    let one = F::one();
    let two = F::lit(2.0);
    if p == one {
        Ok(two / ((nf + one) * (nf + two)))
    } else if p == two {
        Ok(one / (nf + two))
    } else {
        Err(Error::UnsupportedExponent(p.to_f64_lossy()))
    }
}
