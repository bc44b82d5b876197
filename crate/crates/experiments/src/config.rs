use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{config_err, ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    LilBall,
    OneSample,
    TwoSample,
    CdfCompare,
    AcceptRate,
    RotBilinear,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::LilBall,
        ExperimentKind::OneSample,
        ExperimentKind::TwoSample,
        ExperimentKind::CdfCompare,
        ExperimentKind::AcceptRate,
        ExperimentKind::RotBilinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::LilBall => "lil-ball",
            ExperimentKind::OneSample => "one-sample",
            ExperimentKind::TwoSample => "two-sample",
            ExperimentKind::CdfCompare => "cdf-compare",
            ExperimentKind::AcceptRate => "accept-rate",
            ExperimentKind::RotBilinear => "rot-bilinear",
        }
    }

    /// Grid keys this kind reads.
    fn grid_keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::LilBall => &["p", "n"],
            ExperimentKind::OneSample => &["n", "lambda", "analytic-moments"],
            ExperimentKind::TwoSample => &["n", "m", "var1", "var2"],
            ExperimentKind::CdfCompare => &["n", "m", "var1", "var2", "t-grid"],
            ExperimentKind::AcceptRate => &["p"],
            ExperimentKind::RotBilinear => &["n"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ExperimentError::Usage(format!("unknown experiment kind '{s}'")))
    }
}

/// Kind-specific parameter lists. `f64::INFINITY` is allowed in `p` and
/// `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    pub p: Vec<f64>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub lambda: Vec<f64>,
    pub var1: f64,
    pub var2: f64,
    /// Evaluation points for cdf-compare; `None` means 41 points over ±3 sd.
    pub t_grid: Option<Vec<f64>>,
    /// one-sample: use the model's σ and ω instead of plug-in estimates.
    pub analytic_moments: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    /// Replicates per grid point. accept-rate reads it as the proposal count.
    pub reps: usize,
    /// Randomization replicates, or rotations for rot-bilinear.
    pub r: usize,
    pub grids: Grids,
    pub out_dir: PathBuf,
}

pub const DEFAULT_SEED: u64 = 20_240_517;

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        let inf = f64::INFINITY;
        let mut grids = Grids {
            p: Vec::new(),
            n: Vec::new(),
            m: Vec::new(),
            lambda: Vec::new(),
            var1: 1.0,
            var2: 16.0,
            t_grid: None,
            analytic_moments: false,
        };
        let (reps, r) = match kind {
            ExperimentKind::LilBall => {
                grids.p = vec![1.0, 2.0, inf];
                grids.n = vec![10, 100, 1_000, 10_000, 100_000];
                (1000, 1)
            }
            ExperimentKind::OneSample => {
                grids.n = vec![100];
                grids.lambda = vec![inf, 10.0, 1.0, 0.1, 0.01, 0.001];
                (200, 2000)
            }
            ExperimentKind::TwoSample => {
                grids.n = vec![200];
                grids.m = vec![25, 50, 100, 200];
                (200, 2000)
            }
            ExperimentKind::CdfCompare => {
                grids.n = vec![200];
                grids.m = vec![100];
                (10_000, 1)
            }
            ExperimentKind::AcceptRate => {
                grids.p = vec![1.0, 2.0, 4.0, 8.0];
                (100_000, 1)
            }
            ExperimentKind::RotBilinear => {
                grids.n = vec![6];
                (1, 20_000)
            }
        };
        ExperimentConfig {
            kind,
            seed: DEFAULT_SEED,
            reps,
            r,
            grids,
            out_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grids;
        if self.reps == 0 {
            return config_err("reps must be >= 1");
        }
        if self.r == 0 {
            return config_err("r must be >= 1");
        }
        let single_n = || -> Result<usize> {
            match g.n.as_slice() {
                [n] => Ok(*n),
                _ => config_err(format!("{} takes exactly one n", self.kind)),
            }
        };
        let positive_vars = || -> Result<()> {
            for (name, v) in [("var1", g.var1), ("var2", g.var2)] {
                if !(v > 0.0 && v.is_finite()) {
                    return config_err(format!("{name} must be positive and finite"));
                }
            }
            Ok(())
        };
        match self.kind {
            ExperimentKind::LilBall => {
                nonempty("p", &g.p)?;
                nonempty("n", &g.n)?;
                if g.p.iter().any(|&p| p.is_nan() || p <= 0.0) {
                    return config_err("p must be positive (inf allowed)");
                }
                if g.n.iter().any(|&n| n < 3) {
                    return config_err("lil-ball needs n >= 3");
                }
            }
            ExperimentKind::OneSample => {
                nonempty("lambda", &g.lambda)?;
                if single_n()? < 2 {
                    return config_err("one-sample needs n >= 2");
                }
                if g.lambda.iter().any(|&l| l.is_nan() || l <= 0.0) {
                    return config_err("lambda must be positive (inf allowed)");
                }
            }
            ExperimentKind::TwoSample => {
                nonempty("m", &g.m)?;
                let n = single_n()?;
                if n < 2 || g.m.iter().any(|&m| m < 2) {
                    return config_err("two-sample needs group sizes >= 2");
                }
                positive_vars()?;
            }
            ExperimentKind::CdfCompare => {
                let n = single_n()?;
                let m = match g.m.as_slice() {
                    [m] => *m,
                    _ => return config_err("cdf-compare takes exactly one m"),
                };
                if n == 0 || m == 0 {
                    return config_err("group sizes must be >= 1");
                }
                positive_vars()?;
                if let Some(t) = &g.t_grid {
                    nonempty("t-grid", t)?;
                    if t.iter().any(|v| !v.is_finite()) {
                        return config_err("t-grid values must be finite");
                    }
                }
            }
            ExperimentKind::AcceptRate => {
                nonempty("p", &g.p)?;
                if g.p.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
                    return config_err("accept-rate needs finite positive p");
                }
            }
            ExperimentKind::RotBilinear => {
                nonempty("n", &g.n)?;
                if g.n.contains(&0) {
                    return config_err("n must be >= 1");
                }
                if self.r < 2 {
                    return config_err("rot-bilinear needs r >= 2 rotations");
                }
            }
        }
        Ok(())
    }
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        config_err(format!("grid '{name}' is empty"))
    } else {
        Ok(())
    }
}

/// Optional settings from flags or a config file, applied over the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub r: Option<usize>,
    pub out: Option<PathBuf>,
    pub p: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
    pub m: Option<Vec<usize>>,
    pub lambda: Option<Vec<f64>>,
    pub var1: Option<f64>,
    pub var2: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub analytic_moments: Option<bool>,
}

impl Overrides {
    /// Parses `key = value` lines. `#` starts a comment; keys match the
    /// long flag names.
    pub fn parse_kv(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return config_err(format!("line {}: expected key = value", lineno + 1));
            };
            o.set(key.trim(), value.trim())
                .map_err(|e| ExperimentError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "seed" => self.seed = Some(parse_scalar(value)?),
            "reps" => self.reps = Some(parse_scalar(value)?),
            "r" => self.r = Some(parse_scalar(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "p" => self.p = Some(parse_real_list(value)?),
            "n" => self.n = Some(parse_list(value)?),
            "m" => self.m = Some(parse_list(value)?),
            "lambda" => self.lambda = Some(parse_real_list(value)?),
            "var1" => self.var1 = Some(parse_real(value)?),
            "var2" => self.var2 = Some(parse_real(value)?),
            "t-grid" => self.t_grid = Some(parse_real_list(value)?),
            "analytic-moments" => self.analytic_moments = Some(parse_scalar(value)?),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Fields set here win over `fallback`.
    pub fn or(self, fallback: Overrides) -> Overrides {
        Overrides {
            seed: self.seed.or(fallback.seed),
            reps: self.reps.or(fallback.reps),
            r: self.r.or(fallback.r),
            out: self.out.or(fallback.out),
            p: self.p.or(fallback.p),
            n: self.n.or(fallback.n),
            m: self.m.or(fallback.m),
            lambda: self.lambda.or(fallback.lambda),
            var1: self.var1.or(fallback.var1),
            var2: self.var2.or(fallback.var2),
            t_grid: self.t_grid.or(fallback.t_grid),
            analytic_moments: self.analytic_moments.or(fallback.analytic_moments),
        }
    }

    fn grid_keys_set(&self) -> Vec<&'static str> {
        [
            ("p", self.p.is_some()),
            ("n", self.n.is_some()),
            ("m", self.m.is_some()),
            ("lambda", self.lambda.is_some()),
            ("var1", self.var1.is_some()),
            ("var2", self.var2.is_some()),
            ("t-grid", self.t_grid.is_some()),
            ("analytic-moments", self.analytic_moments.is_some()),
        ]
        .into_iter()
        .filter_map(|(k, set)| set.then_some(k))
        .collect()
    }

    /// Builds a validated config. Grid keys the kind does not read are a
    /// config error.
    pub fn into_config(self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        if let Some(bad) = self
            .grid_keys_set()
            .into_iter()
            .find(|k| !kind.grid_keys().contains(k))
        {
            return config_err(format!("'{bad}' does not apply to {kind}"));
        }
        let mut c = ExperimentConfig::defaults(kind);
        let g = &mut c.grids;
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.reps {
            c.reps = v;
        }
        if let Some(v) = self.r {
            c.r = v;
        }
        if let Some(v) = self.out {
            c.out_dir = v;
        }
        if let Some(v) = self.p {
            g.p = v;
        }
        if let Some(v) = self.n {
            g.n = v;
        }
        if let Some(v) = self.m {
            g.m = v;
        }
        if let Some(v) = self.lambda {
            g.lambda = v;
        }
        if let Some(v) = self.var1 {
            g.var1 = v;
        }
        if let Some(v) = self.var2 {
            g.var2 = v;
        }
        if self.t_grid.is_some() {
            g.t_grid = self.t_grid;
        }
        if let Some(v) = self.analytic_moments {
            g.analytic_moments = v;
        }
        c.validate()?;
        Ok(c)
    }
}

fn parse_scalar<T: FromStr>(s: &str) -> std::result::Result<T, String> {
    s.trim().parse().map_err(|_| format!("cannot parse '{s}'"))
}

/// Accepts `inf` / `infinity` in any case.
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    match t.parse::<f64>() {
        Ok(v) if !v.is_nan() => Ok(v),
        _ => Err(format!("cannot parse '{s}' as a number")),
    }
}

/// Comma-separated list.
pub fn parse_list<T: FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',').map(parse_scalar).collect()
}

pub fn parse_real_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_real).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        let err = "frobnicate".parse::<ExperimentKind>().unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn defaults_validate() {
        for k in ExperimentKind::ALL {
            ExperimentConfig::defaults(k).validate().unwrap();
        }
    }

    #[test]
    fn kv_file_and_precedence() {
        let file = Overrides::parse_kv("# comment\nseed = 7\nreps=3\np = 1, inf\n").unwrap();
        assert_eq!(file.p, Some(vec![1.0, f64::INFINITY]));
        let flags = Overrides {
            seed: Some(9),
            ..Default::default()
        };
        let c = flags.or(file).into_config(ExperimentKind::LilBall).unwrap();
        assert_eq!((c.seed, c.reps), (9, 3));
        assert_eq!(c.grids.p, vec![1.0, f64::INFINITY]);
    }

    #[test]
    fn bad_inputs_are_config_errors() {
        assert!(Overrides::parse_kv("nonsense").is_err());
        assert!(Overrides::parse_kv("colour = red").is_err());
        let mismatch = Overrides {
            lambda: Some(vec![1.0]),
            ..Default::default()
        };
        let e = mismatch.into_config(ExperimentKind::LilBall).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let two_n = Overrides {
            n: Some(vec![10, 20]),
            ..Default::default()
        };
        assert!(two_n.into_config(ExperimentKind::OneSample).is_err());
        let zero = Overrides {
            reps: Some(0),
            ..Default::default()
        };
        assert!(zero.into_config(ExperimentKind::AcceptRate).is_err());
    }
}
