//! Centered exponentially modified Gaussian: `N(0,1) + Exp(λ) − 1/λ`.

use crate::error::{domain, Result};
use crate::rng::SeededStream;
use crate::scalar::Real;
use crate::special::normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EmgdModel<F> {
    /// Finite rate `λ > 0`.
    Rate(F),
    /// `λ = ∞`: the exponential part vanishes.
    Gaussian,
}

impl<F: Real> EmgdModel<F> {
    /// `+∞` maps to [`EmgdModel::Gaussian`].
    pub fn new(rate: F) -> Result<Self> {
        if rate.is_infinite() && rate > F::zero() {
            return Ok(EmgdModel::Gaussian);
        }
        if !(rate > F::zero()) {
            return domain(format!("EMGD rate must be positive, got {rate}"));
        }
        Ok(EmgdModel::Rate(rate))
    }

    pub fn variance(&self) -> F {
        match *self {
            EmgdModel::Rate(l) => F::one() + (l * l).recip(),
            EmgdModel::Gaussian => F::one(),
        }
    }

    /// `E|Z|³`, from `E|N + c|³ = (c³ + 3c)(2Φ(c) − 1) + 2(c² + 2)φ(c)`
    /// integrated against the exponential part (Simpson on `u = λy`).
    pub fn third_abs_moment(&self) -> F {
        let folded = |c: F| {
            let phi = (-(c * c) / F::lit(2.0)).exp() / F::lit(2.0 * std::f64::consts::PI).sqrt();
            (c * c * c + F::lit(3.0) * c) * (F::lit(2.0) * normal_cdf(c) - F::one())
                + F::lit(2.0) * (c * c + F::lit(2.0)) * phi
        };
        match *self {
            EmgdModel::Gaussian => folded(F::zero()),
            EmgdModel::Rate(l) => {
                let upper = 60.0;
                let steps = 40_000usize;
                let h = upper / steps as f64;
                let f = |u: f64| {
                    let c = (F::lit(u) - F::one()) / l;
                    F::lit((-u).exp()) * folded(c)
                };
                let mut acc = f(0.0) + f(upper);
                for i in 1..steps {
                    let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                    acc += F::lit(w) * f(i as f64 * h);
                }
                acc * F::lit(h / 3.0)
            }
        }
    }
}

pub fn emgd_sample<F: Real>(model: &EmgdModel<F>, stream: &mut SeededStream) -> F {
    let z = stream.normal_as::<F>();
    match *model {
        EmgdModel::Gaussian => z,
        EmgdModel::Rate(l) => z + (F::lit(stream.standard_exponential()) - F::one()) / l,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    fn draws(model: EmgdModel<f64>, seed: u64, k: usize) -> Vec<f64> {
        let mut s = derive_stream(seed, 0);
        (0..k).map(|_| emgd_sample(&model, &mut s)).collect()
    }

    fn mean_se(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (var / n).sqrt())
    }

    #[test]
    fn gaussian_variance() {
        let sq: Vec<f64> = draws(EmgdModel::Gaussian, 1, 100_000).iter().map(|x| x * x).collect();
        let (m, se) = mean_se(&sq);
        assert!((m - 1.0).abs() <= 3.0 * se);
    }

    #[test]
    fn centered_and_variance_for_unit_rate() {
        let v = draws(EmgdModel::new(1.0).unwrap(), 2, 100_000);
        let (m, se) = mean_se(&v);
        assert!(m.abs() <= 3.0 * se, "{m} ± {se}");
        let sq: Vec<f64> = v.iter().map(|x| (x - m) * (x - m)).collect();
        let (var, se_var) = mean_se(&sq);
        assert!((var - 2.0).abs() <= 3.0 * se_var, "{var} ± {se_var}");
        assert_eq!(EmgdModel::new(1.0).unwrap().variance(), 2.0);
    }

    #[test]
    fn third_moment_matches_simulation() {
        let g = EmgdModel::<f64>::Gaussian.third_abs_moment();
        assert!((g - 4.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
        for &l in &[10.0, 1.0, 0.3] {
            let model = EmgdModel::new(l).unwrap();
            let cubes: Vec<f64> = draws(model, 3, 200_000).iter().map(|x| x.abs().powi(3)).collect();
            let (m, se) = mean_se(&cubes);
            let exact = model.third_abs_moment();
            assert!((m - exact).abs() <= 4.0 * se, "λ={l}: {m} ± {se} vs {exact}");
        }
    }

    #[test]
    fn validation() {
        assert_eq!(EmgdModel::new(f64::INFINITY).unwrap(), EmgdModel::Gaussian);
        assert!(EmgdModel::new(0.0f64).is_err());
        assert!(EmgdModel::new(f64::NAN).is_err());
    }
}
