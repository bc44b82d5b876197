use crate::error::{check_len, domain, Error, Result};
use crate::scalar::Real;
use crate::special::student_t_two_sided;

use super::mean_var;

/// Variance assumption for the two-sample t statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceModel {
    /// Homogeneous variances, pooled estimator, `n + m − 2` df.
    Pooled,
    /// Welch statistic with Welch–Satterthwaite df.
    Welch,
}

/// Parametric t-test result with a two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest<F> {
    pub statistic: F,
    pub df: F,
    pub p_value: F,
}

/// Two-sample t-test on `x = (group 1 of size n, group 2 of size m)`.
pub fn two_sample_t<F: Real>(x: &[F], n: usize, m: usize, variant: VarianceModel) -> Result<TTest<F>> {
    check_len(n + m, x.len())?;
    if n < 2 || m < 2 {
        return domain(format!("two_sample_t needs n, m >= 2, got n={n}, m={m}"));
    }
    let (mean1, s1) = mean_var(&x[..n]);
    let (mean2, s2) = mean_var(&x[n..]);
    let nf = F::from_usize_lossy(n);
    let mf = F::from_usize_lossy(m);
    let one = F::one();
    let diff = mean1 - mean2;
    let (statistic, df) = match variant {
        VarianceModel::Pooled => {
            let df = nf + mf - F::lit(2.0);
            let sp2 = ((nf - one) * s1 + (mf - one) * s2) / df;
            if !(sp2 > F::zero()) {
                return Err(Error::Degenerate("pooled variance is zero".into()));
            }
            (diff / (sp2 * (nf.recip() + mf.recip())).sqrt(), df)
        }
        VarianceModel::Welch => {
            let a = s1 / nf;
            let b = s2 / mf;
            if !(a + b > F::zero()) {
                return Err(Error::Degenerate("both sample variances are zero".into()));
            }
            let df = (a + b) * (a + b) / (a * a / (nf - one) + b * b / (mf - one));
            (diff / (a + b).sqrt(), df)
        }
    };
    Ok(TTest {
        statistic,
        df,
        p_value: student_t_two_sided(statistic, df)?,
    })
}

/// One-sample t-test of zero mean: `√n x̄ / s` with `n − 1` df.
pub fn one_sample_t<F: Real>(x: &[F]) -> Result<TTest<F>> {
    if x.len() < 2 {
        return domain("one_sample_t needs at least 2 observations");
    }
    let (mean, var) = mean_var(x);
    if !(var > F::zero()) {
        return Err(Error::Degenerate("sample variance is zero".into()));
    }
    let nf = F::from_usize_lossy(x.len());
    let statistic = nf.sqrt() * mean / var.sqrt();
    let df = nf - F::one();
    Ok(TTest {
        statistic,
        df,
        p_value: student_t_two_sided(statistic, df)?,
    })
}
