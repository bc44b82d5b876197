//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::Instant;

use rayon::prelude::*;

use haarinv::bounds::{
    lp_gaussian_bound, mixture_null, mixture_tail, tv_bound, two_sample_lp_bound, LpMode,
};
use haarinv::groups::{sample_permutation, sample_rotation, GroupElement, SignFlipGroup};
use haarinv::linalg::Matrix;
use haarinv::lpball::{acceptance_probability, sample_lp_ball, Exponent, LpBallSpec};
use haarinv::special::normal_sf;
use haarinv::stats::{
    mean_diff, randomization_threshold, rotation_bilinear_exact, rotation_bilinear_mc, Reference,
    WeightedStatistic,
};
use haarinv::{derive_stream, TwoSampleModel64};
use haarinv_experiments::csv::{Cell, Table};
use haarinv_experiments::{run, run_to_table, ExperimentConfig, ExperimentKind};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const SEED: u64 = 0x5eed_acce;

fn num(c: &Cell) -> f64 {
    match *c {
        Cell::Int(v) => v as f64,
        Cell::Float(v) => v,
    }
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    let j = t.header.iter().position(|h| *h == name).expect("column");
    t.rows.iter().map(|r| num(&r[j])).collect()
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rotation_average() -> Check {
    let n = 6;
    let mut s = derive_stream(SEED, 1);
    let g: Vec<f64> = (0..n * n).map(|_| s.standard_normal()).collect();
    let sym: Vec<f64> = (0..n * n)
        .map(|k| 0.5 * (g[k] + g[(k % n) * n + k / n]))
        .collect();
    let a = Matrix::from_row_major(n, n, sym).map_err(err)?;
    let x: Vec<f64> = (0..n).map(|_| s.standard_normal()).collect();
    let mc = rotation_bilinear_mc(&a, &x, &x, 20_000, &s).map_err(err)?;
    let exact = rotation_bilinear_exact(&a, &x, &x).map_err(err)?;
    let z = (mc.estimate - exact).abs() / mc.std_error;
    ensure(z <= 4.0, format!("estimate {:.5} exact {:.5} |z| {:.2}", mc.estimate, exact, z))
}

fn second_moments() -> Check {
    let mut worst: f64 = 0.0;
    for (gi, &n) in [2usize, 10, 50].iter().enumerate() {
        for &p in &[1.0, 2.0] {
            let spec = LpBallSpec::<f64>::unit(n, Exponent::finite(p).map_err(err)?).map_err(err)?;
            let stream = derive_stream(SEED, 200 + gi as u64 * 10 + p as u64);
            let sq: Vec<f64> = (0..100_000u64)
                .into_par_iter()
                .map(|k| sample_lp_ball(&spec, &mut stream.child(k))[0].powi(2))
                .collect();
            let (m, se) = mean_se(&sq);
            let nf = n as f64;
            let target = if p == 1.0 {
                2.0 / ((nf + 1.0) * (nf + 2.0))
            } else {
                1.0 / (nf + 2.0)
            };
            let z = (m - target).abs() / se;
            if z > 3.0 {
                return Err(format!("n={n} p={p}: mean {m} target {target} |z| {z:.2}"));
            }
            worst = worst.max(z);
        }
    }
    Ok(format!("6 cells, worst |z| {worst:.2}"))
}

fn acceptance_rate() -> Check {
    let mut c = ExperimentConfig::defaults(ExperimentKind::AcceptRate);
    c.seed = SEED;
    c.reps = 100_000;
    c.grids.p = vec![1.0, 2.0, 4.0, 8.0];
    let t = run_to_table(&c).map_err(err)?;
    let observed = column(&t, "accept_rate");
    let mut worst: f64 = 0.0;
    for (&p, &obs) in c.grids.p.iter().zip(&observed) {
        let theory = acceptance_probability(p).map_err(err)?;
        if !(0.5..=0.75).contains(&theory) {
            return Err(format!("p={p}: theoretical {theory} outside [0.5, 0.75]"));
        }
        if (obs - theory).abs() > 0.01 {
            return Err(format!("p={p}: observed {obs} theoretical {theory}"));
        }
        worst = worst.max((obs - theory).abs());
    }
    Ok(format!("max |observed - theoretical| {worst:.4}"))
}

fn haar_validity() -> Check {
    for &n in &[3usize, 8] {
        let stream = derive_stream(SEED, 400 + n as u64);
        let bad = (0..1000u64)
            .into_par_iter()
            .map(|k| -> Result<bool, String> {
                let r = sample_rotation::<f64>(n, &mut stream.child(k)).map_err(err)?;
                let m = r.matrix();
                let gram = m.transpose().matmul(m).map_err(err)?;
                let det = m.determinant().map_err(err)?;
                Ok(gram.max_abs_diff(&Matrix::identity(n)) > 1e-10 || (det - 1.0).abs() > 1e-10)
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&b| b)
            .count();
        if bad > 0 {
            return Err(format!("{bad} of 1000 rotations at n={n} fail MᵀM = I or det = 1"));
        }
    }
    let stream = derive_stream(SEED, 410);
    let draws: Vec<Vec<f64>> = (0..20_000u64)
        .into_par_iter()
        .map(|k| {
            let r = sample_rotation::<f64>(4, &mut stream.child(k)).expect("rotation");
            r.matrix().as_slice().to_vec()
        })
        .collect();
    let mut worst: f64 = 0.0;
    for e in 0..16 {
        let v: Vec<f64> = draws.iter().map(|d| d[e]).collect();
        let (m, se) = mean_se(&v);
        worst = worst.max(m.abs() / se);
    }
    ensure(worst <= 4.0, format!("orthogonality ok; worst entry-mean |z| {worst:.2}"))
}

fn exact_size() -> Check {
    let n = 10;
    let elements: Vec<GroupElement<f64>> = SignFlipGroup { n }.enumerate().map_err(err)?;
    let stat = WeightedStatistic::<f64>::uniform(n).map_err(err)?;
    let reps = 10_000u64;
    let master = derive_stream(SEED, 500);
    let mut parts = Vec::new();
    for &alpha in &[0.05, 0.1] {
        let rejections = (0..reps)
            .into_par_iter()
            .map(|k| -> Result<bool, String> {
                let mut s = master.child(k);
                let x: Vec<f64> = (0..n).map(|_| 2.0 * s.uniform() - 1.0).collect();
                let t_alpha = randomization_threshold(
                    &x,
                    |y| stat.evaluate(y),
                    Reference::Exact(&elements),
                    alpha,
                    &s,
                )
                .map_err(err)?;
                Ok(stat.evaluate(&x).map_err(err)? > t_alpha)
            })
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&r| r)
            .count();
        let freq = rejections as f64 / reps as f64;
        let limit = alpha + 3.0 * (alpha / reps as f64).sqrt();
        if freq > limit {
            return Err(format!("alpha={alpha}: rejection rate {freq} > {limit:.4}"));
        }
        parts.push(format!("alpha={alpha}: {freq:.4} <= {limit:.4}"));
    }
    Ok(parts.join("; "))
}

fn one_sample_agreement() -> Check {
    let mut c = ExperimentConfig::defaults(ExperimentKind::OneSample);
    c.seed = SEED;
    c.grids.lambda = vec![f64::INFINITY];
    c.grids.n = vec![100];
    c.reps = 200;
    c.r = 2000;
    let t = run_to_table(&c).map_err(err)?;
    let (pt, pr, be) = (column(&t, "p_t"), column(&t, "p_rand"), column(&t, "be_bound"));
    let diffs: Vec<f64> = pt.iter().zip(&pr).map(|(a, b)| (a - b).abs()).collect();
    let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let r = c.r as f64;
    let inside = (0..diffs.len())
        .filter(|&i| diffs[i] <= be[i] + 2.0 * (pr[i] * (1.0 - pr[i]) / r).sqrt())
        .count();
    let frac = inside as f64 / diffs.len() as f64;
    ensure(
        mean <= 0.05 && frac >= 0.9,
        format!("mean |p_t - p_rand| {mean:.4}, within band {:.1}%", 100.0 * frac),
    )
}

fn two_sample_anticonservative() -> Check {
    let mut c = ExperimentConfig::defaults(ExperimentKind::TwoSample);
    c.seed = SEED;
    c.grids.n = vec![200];
    c.grids.m = vec![25, 200];
    c.grids.var1 = 1.0;
    c.grids.var2 = 16.0;
    c.reps = 200;
    c.r = 2000;
    let t = run_to_table(&c).map_err(err)?;
    let (ms, pw, pp) = (column(&t, "m"), column(&t, "p_welch"), column(&t, "p_perm"));
    let pick = |m: f64, f: fn(f64) -> f64| -> Vec<f64> {
        (0..ms.len()).filter(|&i| ms[i] == m).map(|i| f(pp[i] - pw[i])).collect()
    };
    let unbalanced = median(pick(25.0, |d| d));
    let balanced = median(pick(200.0, f64::abs));
    ensure(
        unbalanced < 0.0 && balanced <= 0.05,
        format!("m=25 median diff {unbalanced:.4}; m=200 median |diff| {balanced:.4}"),
    )
}

fn mixture_exactness() -> Check {
    let balanced = TwoSampleModel64::new(30, 30, 1.0, 4.0).map_err(err)?;
    let null = mixture_null(&balanced).map_err(err)?;
    let sd = balanced.mean_diff_variance().sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let t = -2.0 + 0.1 * i as f64;
        worst = worst.max((mixture_tail(&null, t) - normal_sf(t / sd)).abs());
    }
    if worst > 1e-12 {
        return Err(format!("n=m tail deviates by {worst:e}"));
    }
    let model = TwoSampleModel64::new(50, 25, 1.0, 4.0).map_err(err)?;
    let null = mixture_null(&model).map_err(err)?;
    let pairs = 10_000u64;
    let stream = derive_stream(SEED, 800);
    let stats: Vec<f64> = (0..pairs)
        .into_par_iter()
        .map(|k| {
            let mut s = stream.child(k);
            let x = model.sample(&mut s);
            let pi = sample_permutation(75, &mut s).expect("permutation");
            let y = GroupElement::Permutation(pi).apply(&x).expect("apply");
            mean_diff(&y, 50, 25).expect("mean diff")
        })
        .collect();
    let msd = model.mean_diff_variance().sqrt();
    let mut zmax: f64 = 0.0;
    for &q in &[-1.5, -0.5, 0.0, 0.5, 1.5] {
        let t = q * msd;
        let p = mixture_tail(&null, t);
        let emp = stats.iter().filter(|&&v| v > t).count() as f64 / pairs as f64;
        let se = (p * (1.0 - p) / pairs as f64).sqrt();
        zmax = zmax.max((emp - p).abs() / se);
    }
    ensure(
        zmax <= 4.0,
        format!("n=m max dev {worst:.1e}; (50,25) worst binomial |z| {zmax:.2}"),
    )
}

fn bound_degeneracies() -> Check {
    let zeros = [
        tv_bound(&TwoSampleModel64::new(40, 40, 1.0, 9.0).map_err(err)?),
        tv_bound(&TwoSampleModel64::new(80, 20, 3.0, 3.0).map_err(err)?),
        two_sample_lp_bound(40, 40, 1.0, 9.0).map_err(err)?,
        two_sample_lp_bound(80, 20, 3.0, 3.0).map_err(err)?,
        lp_gaussian_bound(2.5, 2.5, LpMode::LambertExact).map_err(err)?,
        lp_gaussian_bound(2.5, 2.5, LpMode::LogUpper).map_err(err)?,
    ];
    if zeros.iter().any(|&z| z != 0.0) {
        return Err(format!("degenerate values not exactly 0: {zeros:?}"));
    }
    for i in -20..=20 {
        let delta = 10f64.powf(0.25 * i as f64);
        let exact = lp_gaussian_bound(1.0, 1.0 + delta, LpMode::LambertExact).map_err(err)?;
        let upper = lp_gaussian_bound(1.0, 1.0 + delta, LpMode::LogUpper).map_err(err)?;
        if exact > upper {
            return Err(format!("delta={delta}: lambert {exact} > log {upper}"));
        }
    }
    let tv = tv_bound(&TwoSampleModel64::new(300, 100, 1.0, 16.0).map_err(err)?);
    ensure((tv - 0.33212).abs() <= 1e-4, format!("zeros exact, ordering holds, tv {tv:.6}"))
}

fn lil_envelope() -> Check {
    let mut c = ExperimentConfig::defaults(ExperimentKind::LilBall);
    c.seed = SEED;
    c.grids.p = vec![2.0];
    c.grids.n = vec![10_000];
    c.reps = 200;
    let mut ratios = column(&run_to_table(&c).map_err(err)?, "ratio");
    ratios.sort_by(f64::total_cmp);
    let q: Vec<f64> = [0.25, 0.5, 0.75].iter().map(|&p| quantile(&ratios, p)).collect();
    let max = *ratios.last().unwrap();
    ensure(
        q.iter().all(|&v| v < 1.0) && max < 1.5,
        format!("quartiles {:.3}/{:.3}/{:.3}, max {max:.3}", q[0], q[1], q[2]),
    )
}

fn small_config(kind: ExperimentKind, out: &std::path::Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::defaults(kind);
    c.seed = SEED;
    c.out_dir = out.to_path_buf();
    match kind {
        ExperimentKind::LilBall => {
            c.grids.n = vec![10, 1000];
            c.reps = 20;
        }
        ExperimentKind::OneSample => {
            c.grids.n = vec![20];
            c.reps = 10;
            c.r = 200;
        }
        ExperimentKind::TwoSample => {
            c.grids.n = vec![40];
            c.grids.m = vec![10, 40];
            c.reps = 10;
            c.r = 200;
        }
        ExperimentKind::CdfCompare => c.reps = 2000,
        ExperimentKind::AcceptRate => c.reps = 20_000,
        ExperimentKind::RotBilinear => {
            c.grids.n = vec![3, 6];
            c.reps = 2;
            c.r = 500;
        }
    }
    c
}

fn determinism() -> Check {
    let a = tempfile::tempdir().map_err(err)?;
    let b = tempfile::tempdir().map_err(err)?;
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    for kind in ExperimentKind::ALL {
        let first = run(&small_config(kind, a.path())).map_err(err)?;
        // Second run on one thread, so scheduling cannot leak into the output.
        let second = single.install(|| run(&small_config(kind, b.path()))).map_err(err)?;
        for (p, q) in first.iter().zip(&second) {
            if std::fs::read(p).map_err(err)? != std::fs::read(q).map_err(err)? {
                return Err(format!("{kind}: {} differs between runs", p.display()));
            }
        }
    }
    Ok("6 kinds byte-identical across runs and thread counts".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("rotation average identity", rotation_average),
        ("lp-ball second moments", second_moments),
        ("ratio-of-uniforms acceptance rate", acceptance_rate),
        ("Haar sampler validity", haar_validity),
        ("exact randomization size", exact_size),
        ("one-sample agreement", one_sample_agreement),
        ("two-sample anti-conservatism", two_sample_anticonservative),
        ("mixture null exactness", mixture_exactness),
        ("bound degeneracies and ordering", bound_degeneracies),
        ("LIL finite-n envelope", lil_envelope),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
