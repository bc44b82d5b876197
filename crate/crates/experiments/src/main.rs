use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use haarinv_experiments::config::parse_real;
use haarinv_experiments::{run, ExperimentError, ExperimentKind, Overrides};

#[derive(Parser)]
#[command(name = "haarinv", version, about = "Group-invariance randomization simulation studies")]
struct Cli {
    #[command(subcommand)]
    kind: Kind,
}

#[derive(Subcommand)]
enum Kind {
    /// LIL ratio of uniform lp-ball coordinates
    LilBall(Flags),
    /// t-test vs sign-flip p-values on EMGD data
    OneSample(Flags),
    /// Welch vs permutation p-values
    TwoSample(Flags),
    /// Empirical CDF of the mean difference vs the permutation mixture
    CdfCompare(Flags),
    /// Exp-power sampler acceptance rate
    AcceptRate(Flags),
    /// Monte Carlo rotation average of a bilinear form
    RotBilinear(Flags),
}

#[derive(Args, Debug)]
struct Flags {
    /// Flat key = value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Randomization replicates (rotations for rot-bilinear)
    #[arg(long)]
    r: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma list; `inf` allowed
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Comma list of EMGD rates; `inf` is the Gaussian limit
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    lambda: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_real)]
    var1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    var2: Option<f64>,
    #[arg(long = "t-grid", value_delimiter = ',', value_parser = parse_real)]
    t_grid: Option<Vec<f64>>,
    /// Use the EMGD model's moments in the Berry-Esseen band
    #[arg(long = "analytic-moments")]
    analytic_moments: bool,
}

impl Flags {
    fn into_overrides(self) -> Result<Overrides, ExperimentError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
                    path: path.clone(),
                    source,
                })?;
                Overrides::parse_kv(&text)?
            }
            None => Overrides::default(),
        };
        let flags = Overrides {
            seed: self.seed,
            reps: self.reps,
            r: self.r,
            out: self.out,
            p: self.p,
            n: self.n,
            m: self.m,
            lambda: self.lambda,
            var1: self.var1,
            var2: self.var2,
            t_grid: self.t_grid,
            analytic_moments: self.analytic_moments.then_some(true),
        };
        Ok(flags.or(file))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match cli.kind {
        Kind::LilBall(f) => (ExperimentKind::LilBall, f),
        Kind::OneSample(f) => (ExperimentKind::OneSample, f),
        Kind::TwoSample(f) => (ExperimentKind::TwoSample, f),
        Kind::CdfCompare(f) => (ExperimentKind::CdfCompare, f),
        Kind::AcceptRate(f) => (ExperimentKind::AcceptRate, f),
        Kind::RotBilinear(f) => (ExperimentKind::RotBilinear, f),
    };
    let result = flags
        .into_overrides()
        .and_then(|o| o.into_config(kind))
        .and_then(|c| run(&c));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("haarinv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
