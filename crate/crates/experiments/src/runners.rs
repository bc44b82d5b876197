use rayon::prelude::*;

use haarinv::bounds::{
    berry_esseen_one_sample, mixture_null, mixture_tail, tv_bound, two_sample_lp_bound,
    BERRY_ESSEEN_C,
};
use haarinv::groups::{SignFlipGroup, SymmetricGroup};
use haarinv::linalg::Matrix;
use haarinv::lpball::{acceptance_probability, sample_lp_ball, ExpPowerSampler, Exponent, LpBallSpec};
use haarinv::stats::{
    emgd_sample, lil_ratio, mean_diff, one_sample_t, randomization_pvalue, rotation_bilinear_exact,
    rotation_bilinear_mc, sample_sd, third_abs_central_moment, two_sample_t, Alternative,
    EmgdModel, RandomizationOptions, Reference, TwoSampleModel, VarianceModel, WeightedStatistic,
};
use haarinv::{derive_stream, SeededStream};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::csv::{Cell, Table};
use crate::error::Result;

fn stream_for(seed: u64, grid: usize, rep: usize) -> SeededStream {
    derive_stream(seed, ((grid as u64) << 32) | rep as u64)
}

fn exponent(p: f64) -> Result<Exponent<f64>> {
    if p.is_infinite() {
        Ok(Exponent::Infinity)
    } else {
        Ok(Exponent::finite(p)?)
    }
}

/// Evaluates `f(grid, rep)` in parallel and returns rows in (grid, rep) order.
fn grid_rows<F>(grid_len: usize, reps: usize, f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(usize, usize) -> Result<Vec<Cell>> + Sync,
{
    (0..grid_len * reps)
        .into_par_iter()
        .map(|k| f(k / reps, k % reps))
        .collect()
}

pub(crate) fn build_table(c: &ExperimentConfig) -> Result<Table> {
    match c.kind {
        ExperimentKind::LilBall => lil_ball(c),
        ExperimentKind::OneSample => one_sample(c),
        ExperimentKind::TwoSample => two_sample(c),
        ExperimentKind::CdfCompare => cdf_compare(c),
        ExperimentKind::AcceptRate => accept_rate(c),
        ExperimentKind::RotBilinear => rot_bilinear(c),
    }
}

fn lil_ball(c: &ExperimentConfig) -> Result<Table> {
    let g = &c.grids;
    let points: Vec<(f64, usize)> = g
        .p
        .iter()
        .flat_map(|&p| g.n.iter().map(move |&n| (p, n)))
        .collect();
    let mut t = Table::new(vec!["p", "n", "rep", "ratio"]);
    t.rows = grid_rows(points.len(), c.reps, |gi, rep| {
        let (p, n) = points[gi];
        let e = exponent(p)?;
        let spec = LpBallSpec::unit(n, e)?;
        let x = sample_lp_ball(&spec, &mut stream_for(c.seed, gi, rep));
        let ratio = lil_ratio(&x, e)?;
        Ok(vec![p.into(), n.into(), rep.into(), ratio.into()])
    })?;
    Ok(t)
}

fn one_sample(c: &ExperimentConfig) -> Result<Table> {
    let g = &c.grids;
    let n = g.n[0];
    let stat = WeightedStatistic::<f64>::uniform(n)?;
    let group = SignFlipGroup { n };
    let options = RandomizationOptions::with_alternative(Alternative::TwoSided);
    let mut t = Table::new(vec!["lambda", "rep", "p_t", "p_rand", "be_bound"]);
    t.rows = grid_rows(g.lambda.len(), c.reps, |gi, rep| {
        let lambda = g.lambda[gi];
        let model = EmgdModel::new(lambda)?;
        let mut s = stream_for(c.seed, gi, rep);
        let x: Vec<f64> = (0..n).map(|_| emgd_sample(&model, &mut s)).collect();
        let p_t = one_sample_t(&x)?.p_value;
        let reference = Reference::MonteCarlo {
            sampler: &group,
            replicates: c.r,
        };
        let p_rand = randomization_pvalue(&x, |y| stat.evaluate(y), reference, options, &s)?.p_value;
        let (sigma, omega) = if g.analytic_moments {
            (model.variance().sqrt(), model.third_abs_moment())
        } else {
            (sample_sd(&x), third_abs_central_moment(&x))
        };
        let be = berry_esseen_one_sample(sigma, omega, stat.weights(), BERRY_ESSEEN_C)?;
        Ok(vec![lambda.into(), rep.into(), p_t.into(), p_rand.into(), be.into()])
    })?;
    Ok(t)
}

fn two_sample(c: &ExperimentConfig) -> Result<Table> {
    let g = &c.grids;
    let n = g.n[0];
    let options = RandomizationOptions::with_alternative(Alternative::TwoSided);
    let mut t = Table::new(vec!["m", "rep", "p_welch", "p_perm", "tv_bound"]);
    t.rows = grid_rows(g.m.len(), c.reps, |gi, rep| {
        let m = g.m[gi];
        let model = TwoSampleModel::new(n, m, g.var1, g.var2)?;
        let mut s = stream_for(c.seed, gi, rep);
        let x = model.sample(&mut s);
        let p_welch = two_sample_t(&x, n, m, VarianceModel::Welch)?.p_value;
        let group = SymmetricGroup { n: n + m };
        let reference = Reference::MonteCarlo {
            sampler: &group,
            replicates: c.r,
        };
        let p_perm =
            randomization_pvalue(&x, |y| mean_diff(y, n, m), reference, options, &s)?.p_value;
        Ok(vec![
            m.into(),
            rep.into(),
            p_welch.into(),
            p_perm.into(),
            tv_bound(&model).into(),
        ])
    })?;
    Ok(t)
}

fn cdf_compare(c: &ExperimentConfig) -> Result<Table> {
    let g = &c.grids;
    let (n, m) = (g.n[0], g.m[0]);
    let model = TwoSampleModel::new(n, m, g.var1, g.var2)?;
    let mut draws: Vec<f64> = (0..c.reps)
        .into_par_iter()
        .map(|rep| {
            let x = model.sample(&mut stream_for(c.seed, 0, rep));
            Ok(mean_diff(&x, n, m)?)
        })
        .collect::<Result<_>>()?;
    draws.sort_by(f64::total_cmp);
    // The permutation law is symmetric, so orienting the model only
    // relabels the groups.
    let null = mixture_null(&model.oriented())?;
    let band = two_sample_lp_bound(n, m, g.var1, g.var2)?;
    let grid = g.t_grid.clone().unwrap_or_else(|| {
        let sd = model.mean_diff_variance().sqrt();
        (0..41).map(|i| sd * (-3.0 + 0.15 * i as f64)).collect()
    });
    let total = draws.len() as f64;
    let mut t = Table::new(vec!["t", "F_empirical", "F_mixture", "lp_band"]);
    for &x in &grid {
        let below = draws.partition_point(|&d| d <= x) as f64;
        let f_mix = 1.0 - mixture_tail(&null, x);
        t.rows.push(vec![x.into(), (below / total).into(), f_mix.into(), band.into()]);
    }
    Ok(t)
}

fn accept_rate(c: &ExperimentConfig) -> Result<Table> {
    let g = &c.grids;
    let rows = (0..g.p.len())
        .into_par_iter()
        .map(|gi| {
            let p = g.p[gi];
            let sampler = ExpPowerSampler::new(p)?;
            let mut s = stream_for(c.seed, gi, 0);
            let accepted = (0..c.reps).filter(|_| sampler.propose(&mut s).is_some()).count();
            Ok(vec![
                p.into(),
                c.reps.into(),
                (accepted as f64 / c.reps as f64).into(),
                acceptance_probability(p)?.into(),
            ])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(vec!["p", "trials", "accept_rate", "theoretical"]);
    t.rows = rows;
    Ok(t)
}

/// Random symmetric `A = (G + Gᵀ)/2` and Gaussian `x`, `y`.
fn bilinear_inputs(n: usize, s: &mut SeededStream) -> Result<(Matrix<f64>, Vec<f64>, Vec<f64>)> {
    let gauss: Vec<f64> = (0..n * n).map(|_| s.standard_normal()).collect();
    let mut sym = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            sym[i * n + j] = 0.5 * (gauss[i * n + j] + gauss[j * n + i]);
        }
    }
    let a = Matrix::from_row_major(n, n, sym)?;
    let x = (0..n).map(|_| s.standard_normal()).collect();
    let y = (0..n).map(|_| s.standard_normal()).collect();
    Ok((a, x, y))
}

fn rot_bilinear(c: &ExperimentConfig) -> Result<Table> {
    let g = &c.grids;
    let mut t = Table::new(vec!["n", "rep", "estimate", "exact", "std_error"]);
    // Rotations are already drawn in parallel inside the estimator.
    for (gi, &n) in g.n.iter().enumerate() {
        for rep in 0..c.reps {
            let mut s = stream_for(c.seed, gi, rep);
            let (a, x, y) = bilinear_inputs(n, &mut s)?;
            let mc = rotation_bilinear_mc(&a, &x, &y, c.r, &s)?;
            let exact = rotation_bilinear_exact(&a, &x, &y)?;
            t.rows.push(vec![
                n.into(),
                rep.into(),
                mc.estimate.into(),
                exact.into(),
                mc.std_error.into(),
            ]);
        }
    }
    Ok(t)
}
