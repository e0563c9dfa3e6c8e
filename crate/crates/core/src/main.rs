//! Command-line front end of `markov_copula`.
//!
//! Exit status: 0 on success, 2 on invalid input, 1 on runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use markov_copula::convergence::DiscrepancyOptions;
use markov_copula::io::{read_sample_file, to_sorted_json, write_output, write_sample};
use markov_copula::metrics::{QuadratureRule, QuadratureSpec, DEFAULT_RESOLUTION};
use markov_copula::registry::{FamilySpec, Structure};
use markov_copula::sampling::{sample, RngSpec};
use markov_copula::study::{
    approximate, approximation_csv, converge, estimate, records_csv, simulate, summary_json,
    Estimator, ParameterSequence, StudyConfig, PROFILE_POINTS, PROFILE_Y_GRID, STUDY_RESOLUTION,
};
use markov_copula::{Error, Result};

#[derive(Parser)]
#[command(name = "markov-copula", version, about = "Copula dependence analysis through Markov kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family specification `NAME[:PARAMS]`, e.g. `gumbel:3` or `mo:0.3,0.7`.
    #[arg(long)]
    copula: String,
    /// Knot file (`x,a` header) for `pickands-pwl`.
    #[arg(long)]
    knots: Option<PathBuf>,
}

impl FamilyArgs {
    fn parse(&self) -> Result<FamilySpec> {
        FamilySpec::parse(&self.copula, self.knots.as_deref())
    }
}

#[derive(Args)]
struct QuadratureArgs {
    /// Quadrature resolution per axis.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    m: usize,
    /// Quadrature rule: `gauss-legendre2`, `midpoint` or `cell-average`.
    #[arg(long, default_value = "gauss-legendre2")]
    rule: String,
}

impl QuadratureArgs {
    fn spec(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.m, self.rule.parse::<QuadratureRule>()?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dependence measures and distances to independence (JSON).
    Measure {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        quadrature: QuadratureArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate from a sample CSV with header `x,y` (JSON report).
    Estimate {
        #[arg(long)]
        input: PathBuf,
        /// `chatterjee`, `plugin-arch` or `plugin-ev`.
        #[arg(long)]
        mode: String,
        /// Seed of the tie-breaking permutation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        quadrature: QuadratureArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replication study: record CSV and summary JSON.
    Simulate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100, 500, 2000])]
        sizes: Vec<usize>,
        /// Replications per (estimator, size) cell.
        #[arg(long = "R", default_value_t = 500)]
        replications: usize,
        /// Comma-separated estimators; defaults to `chatterjee` plus the plug-in matching the family.
        #[arg(long, value_delimiter = ',')]
        estimators: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cell-average quadrature resolution of plug-in estimates.
        #[arg(long, default_value_t = STUDY_RESOLUTION)]
        m: usize,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        /// Record per-replication wall time (makes output non-reproducible).
        #[arg(long)]
        timings: bool,
        /// Record-level CSV; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON; standard output when absent.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Draw a sample (CSV with header `x,y`).
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discrepancy curves along a parameter sequence (CSV).
    Converge {
        #[command(flatten)]
        family: FamilyArgs,
        /// Indices `k` of the sequence `θ + 1/k`.
        #[arg(long, value_delimiter = ',', conflicts_with = "thetas")]
        k: Vec<u32>,
        /// Explicit parameter values.
        #[arg(long, value_delimiter = ',')]
        thetas: Vec<f64>,
        /// Subset of metric columns.
        #[arg(long, value_delimiter = ',')]
        metrics: Vec<String>,
        #[command(flatten)]
        quadrature: QuadratureArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wcc-profile summaries of checkerboard approximations (CSV).
    Approximate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', default_values_t = vec![8usize, 16, 32, 64, 128, 256])]
        resolutions: Vec<usize>,
        /// Number of golden-ratio abscissae.
        #[arg(long, default_value_t = PROFILE_POINTS)]
        points: usize,
        /// `y` grid of the Lévy distances.
        #[arg(long, default_value_t = PROFILE_Y_GRID)]
        y_grid: usize,
        #[command(flatten)]
        quadrature: QuadratureArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_estimators(family: &FamilySpec) -> Result<Vec<Estimator>> {
    Ok(match family.structure()? {
        Structure::Archimedean(_) => vec![Estimator::Chatterjee, Estimator::PluginArch],
        Structure::ExtremeValue(_) => vec![Estimator::Chatterjee, Estimator::PluginEv],
        Structure::Other => vec![Estimator::Chatterjee],
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Measure { family, quadrature, out } => {
            let report = markov_copula::study::measure(&family.parse()?, &quadrature.spec()?)?;
            write_output(out.as_deref(), to_sorted_json(&report)?.as_bytes())
        }
        Command::Estimate { input, mode, seed, quadrature, out } => {
            let mode: Estimator = mode.parse()?;
            let q = quadrature.spec()?;
            let s = read_sample_file(&input)?;
            let report = estimate(&s, mode, seed, &q)?;
            write_output(out.as_deref(), to_sorted_json(&report)?.as_bytes())
        }
        Command::Simulate {
            family,
            sizes,
            replications,
            estimators,
            seed,
            m,
            jobs,
            timings,
            out,
            summary,
        } => {
            let family = family.parse()?;
            let estimators = if estimators.is_empty() {
                default_estimators(&family)?
            } else {
                estimators.iter().map(|e| e.parse()).collect::<Result<_>>()?
            };
            let cfg = StudyConfig {
                family,
                sizes,
                replications,
                estimators,
                seed,
                m,
                timings,
            };
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if jobs == 0 {
                return Err(Error::InvalidConfig("--jobs must be positive".into()));
            }
            let result = simulate(&cfg, jobs)?;
            write_output(out.as_deref(), records_csv(&result.records)?.as_bytes())?;
            write_output(summary.as_deref(), summary_json(&result.summary)?.as_bytes())
        }
        Command::Sample { family, n, seed, stream, out } => {
            let c = family.parse()?.copula()?;
            let s = sample(c.as_ref(), n, RngSpec::new(seed, stream))?;
            let mut buf = Vec::new();
            write_sample(&mut buf, &s)?;
            write_output(out.as_deref(), &buf)
        }
        Command::Converge { family, k, thetas, metrics, quadrature, out } => {
            let seq = if !thetas.is_empty() {
                ParameterSequence::Explicit(thetas)
            } else if !k.is_empty() {
                ParameterSequence::Harmonic(k)
            } else {
                ParameterSequence::Harmonic(vec![1, 2, 4, 8, 16, 32, 64])
            };
            let o = DiscrepancyOptions {
                quadrature: quadrature.spec()?,
                ..Default::default()
            };
            let metrics = (!metrics.is_empty()).then_some(metrics.as_slice());
            let csv = converge(&family.parse()?, &seq, metrics, &o)?;
            write_output(out.as_deref(), csv.as_bytes())
        }
        Command::Approximate { family, resolutions, points, y_grid, quadrature, out } => {
            let rows = approximate(&family.parse()?, &resolutions, &quadrature.spec()?, points, y_grid)?;
            write_output(out.as_deref(), approximation_csv(&rows)?.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
