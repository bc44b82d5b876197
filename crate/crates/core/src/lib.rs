//! Randomization inference under group invariance.
//!
//! * [`rng`]: seeded, splittable random streams.
//! * [`special`]: log-gamma, Gaussian and Student-t CDFs, Lambert W,
//!   hypergeometric weights.
//! * [`groups`]: Haar sampling on `{±1}ⁿ`, `Sₙ` and `SO(n)`.
//! * [`lpball`]: uniform points in `ℓ_pⁿ` balls, volumes, moments.
//! * [`stats`]: statistics, t-tests and the randomization engine.
//! * [`bounds`]: closed-form distances and tail bounds.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Series coefficients are kept as published.
#![allow(clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod lpball;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use rng::{derive_stream, SeededStream};
pub use scalar::Real;

pub type Matrix64 = linalg::Matrix<f64>;
pub type Rotation64 = groups::Rotation<f64>;
pub type GroupElement64 = groups::GroupElement<f64>;
pub type LpBallSpec64 = lpball::LpBallSpec<f64>;
pub type Exponent64 = lpball::Exponent<f64>;
pub type WeightedStatistic64 = stats::WeightedStatistic<f64>;
pub type TwoSampleModel64 = stats::TwoSampleModel<f64>;
pub type EmgdModel64 = stats::EmgdModel<f64>;
pub type RandomizationOutcome64 = stats::RandomizationOutcome<f64>;
pub type GaussianMixtureNull64 = bounds::GaussianMixtureNull<f64>;
pub type SOnTailParams64 = bounds::SOnTailParams<f64>;

pub type Matrix32 = linalg::Matrix<f32>;
pub type Rotation32 = groups::Rotation<f32>;
pub type LpBallSpec32 = lpball::LpBallSpec<f32>;
