//! Randomization p-values and thresholds over a group orbit.
//!
//! Monte Carlo mode draws `r` group elements, element `k` from
//! `stream.child(k)`, and reports the add-one estimator
//! `(1 + #{k : T(π_k x) ≥ T(x)}) / (1 + r)`. Exact mode walks a full
//! enumeration and reports `#{g : T(π_g x) ≥ T(x)} / |G|`. Either way the
//! output does not depend on the rayon thread count.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::groups::{GroupElement, GroupSampler};
use crate::rng::SeededStream;
use crate::scalar::Real;

/// Reference distribution for the statistic.
#[derive(Clone, Copy)]
pub enum Reference<'a, F: Real> {
    MonteCarlo {
        sampler: &'a dyn GroupSampler<F>,
        replicates: usize,
    },
    Exact(&'a [GroupElement<F>]),
}

impl<F: Real> std::fmt::Debug for Reference<'_, F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reference::MonteCarlo { sampler, replicates } => f
                .debug_struct("MonteCarlo")
                .field("dimension", &sampler.dimension())
                .field("replicates", replicates)
                .finish(),
            Reference::Exact(all) => f.debug_tuple("Exact").field(&all.len()).finish(),
        }
    }
}

/// Which tail counts as extreme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alternative {
    /// Large `T` is extreme.
    #[default]
    Greater,
    /// Small `T` is extreme (scores `−T`).
    Less,
    /// Large `|T|` is extreme.
    TwoSided,
}

impl Alternative {
    #[inline]
    pub fn score<F: Real>(self, t: F) -> F {
        match self {
            Alternative::Greater => t,
            Alternative::Less => -t,
            Alternative::TwoSided => t.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomizationOptions<F> {
    pub alternative: Alternative,
    /// Replicate scores within `tie_tolerance · max(|score|)` below the
    /// observed score count as ties, so reorderings of a floating-point sum
    /// do not break exact invariance.
    pub tie_tolerance: F,
}

impl<F: Real> Default for RandomizationOptions<F> {
    fn default() -> Self {
        RandomizationOptions {
            alternative: Alternative::Greater,
            tie_tolerance: F::lit(1e-9),
        }
    }
}

impl<F: Real> RandomizationOptions<F> {
    pub fn with_alternative(alternative: Alternative) -> Self {
        RandomizationOptions {
            alternative,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomizationOutcome<F> {
    /// `T(x)`.
    pub observed: F,
    /// `T(π_g x)` for each sampled or enumerated `g`, in draw order.
    pub replicates: Vec<F>,
    pub p_value: F,
    /// `t_α` on the score scale, when a level was requested.
    pub threshold: Option<F>,
    pub exact: bool,
}

fn orbit<F, S>(x: &[F], statistic: &S, reference: &Reference<'_, F>, stream: &SeededStream) -> Result<Vec<F>>
where
    F: Real,
    S: Fn(&[F]) -> Result<F> + Sync,
{
    match *reference {
        Reference::MonteCarlo { sampler, replicates } => {
            if sampler.dimension() != x.len() {
                return Err(crate::Error::DimensionMismatch {
                    expected: sampler.dimension(),
                    actual: x.len(),
                });
            }
            (0..replicates as u64)
                .into_par_iter()
                .map(|k| {
                    let mut s = stream.child(k);
                    let g = sampler.sample(&mut s)?;
                    statistic(&g.apply(x)?)
                })
                .collect()
        }
        Reference::Exact(elements) => {
            if elements.is_empty() {
                return domain("exact reference needs at least one group element");
            }
            elements
                .par_iter()
                .map(|g| statistic(&g.apply(x)?))
                .collect()
        }
    }
}

/// Smallest achieved score `t` with `#{s > t} / len ≤ α`.
fn threshold_from_scores<F: Real>(scores: &[F], alpha: F) -> Option<F> {
    if scores.is_empty() {
        return None;
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let total = F::from_usize_lossy(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let t = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] <= t {
            j += 1;
        }
        if F::from_usize_lossy(sorted.len() - j) / total <= alpha {
            return Some(t);
        }
        i = j;
    }
    sorted.last().copied()
}

/// Runs the randomization test and, when `alpha` is given, also the
/// threshold `t_α` (on the score scale of `options.alternative`).
pub fn randomization_test<F, S>(
    x: &[F],
    statistic: S,
    reference: Reference<'_, F>,
    options: RandomizationOptions<F>,
    alpha: Option<F>,
    stream: &SeededStream,
) -> Result<RandomizationOutcome<F>>
where
    F: Real,
    S: Fn(&[F]) -> Result<F> + Sync,
{
    if let Some(a) = alpha {
        if !(a > F::zero() && a < F::one()) {
            return domain(format!("alpha must lie in (0, 1), got {a}"));
        }
    }
    let observed = statistic(x)?;
    let replicates = orbit(x, &statistic, &reference, stream)?;
    let alt = options.alternative;
    let obs_score = alt.score(observed);
    let scores: Vec<F> = replicates.iter().map(|&t| alt.score(t)).collect();
    let scale = scores
        .iter()
        .fold(obs_score.abs(), |acc, &s| acc.max(s.abs()));
    let cutoff = obs_score - options.tie_tolerance * scale;
    let hits = scores.iter().filter(|&&s| s >= cutoff).count();
    let exact = matches!(reference, Reference::Exact(_));
    let p_value = if exact {
        F::from_usize_lossy(hits) / F::from_usize_lossy(scores.len())
    } else {
        F::from_usize_lossy(1 + hits) / F::from_usize_lossy(1 + scores.len())
    };
    let threshold = alpha.and_then(|a| threshold_from_scores(&scores, a));
    Ok(RandomizationOutcome {
        observed,
        replicates,
        p_value,
        threshold,
        exact,
    })
}

/// Randomization p-value under `options.alternative`.
pub fn randomization_pvalue<F, S>(
    x: &[F],
    statistic: S,
    reference: Reference<'_, F>,
    options: RandomizationOptions<F>,
    stream: &SeededStream,
) -> Result<RandomizationOutcome<F>>
where
    F: Real,
    S: Fn(&[F]) -> Result<F> + Sync,
{
    randomization_test(x, statistic, reference, options, None, stream)
}

/// Randomization threshold `t_α(x)` for the upper tail of `T`.
///
/// With `r = 0` Monte Carlo replicates there is nothing to threshold and the
/// observed statistic is returned.
pub fn randomization_threshold<F, S>(
    x: &[F],
    statistic: S,
    reference: Reference<'_, F>,
    alpha: F,
    stream: &SeededStream,
) -> Result<F>
where
    F: Real,
    S: Fn(&[F]) -> Result<F> + Sync,
{
    let out = randomization_test(
        x,
        statistic,
        reference,
        RandomizationOptions::default(),
        Some(alpha),
        stream,
    )?;
    Ok(out.threshold.unwrap_or(out.observed))
}
