//! The `sphframe` command-line front-end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or validation
//! error, 3 I/O error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::frames::{decompose, MultiresolutionLadder};
use crate::grid::{build_grid, SampleVector, SpherePoint, SphericalGrid};
use crate::harmonics::{coeff_len, eval_y, HarmonicIndex};
use crate::io;
use crate::transform::{analyze, gram_residual, synthesize_on_grid, weighted_least_squares, CoeffVector};

/// `verify` fails when the Gram residual reaches this.
pub const VERIFY_THRESHOLD: f64 = 1e-10;

/// Seed of the coefficient vector used for the `verify` round trip.
const ROUNDTRIP_SEED: u64 = 0x5eed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sphframe",
    version,
    about = "Spherical harmonic transforms, weighted least squares and tight frames on a Gauss-Legendre grid"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump the nodal grid as CSV (k,j,theta,phi,weight).
    Grid(GridArgs),
    /// Dump the Gauss-Legendre rule as CSV (k,lambda,weight).
    Rule(GridArgs),
    /// Check the Gram identity and the analysis/synthesis round trip.
    Verify(VerifyArgs),
    /// Discrete Laplace-Fourier coefficients of grid samples.
    Analyze(FitArgs),
    /// Evaluate a coefficient file at the grid nodes.
    Synthesize(SynthesizeArgs),
    /// Weighted least-squares fit; reports the weighted residual.
    Fit(FitArgs),
    /// Multiresolution frame decomposition.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid degree N.
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Max degree m (coefficients of degree < m); defaults to N.
    #[arg(long = "m", value_parser = clap::value_parser!(u32).range(1..))]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Sample CSV (k,j,re,im) in canonical node order.
    #[arg(long = "in", conflicts_with = "function")]
    pub input: Option<PathBuf>,
    /// Built-in function: const, Y:n:k, or gauss-bump:ax,ay,az (a scalar c means a = (0,0,c)).
    #[arg(long = "fn")]
    pub function: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long = "m", value_parser = clap::value_parser!(u32).range(1..))]
    pub m: Option<u32>,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Coefficient JSON file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Strictly increasing cutoffs m_1 < m_2 < ... <= N, e.g. 1,2,4.
    #[arg(long, value_delimiter = ',', required = true)]
    pub cutoffs: Vec<usize>,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Built-in test functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    Constant,
    Harmonic(HarmonicIndex),
    /// `exp(ξ·a)`, not band-limited.
    GaussBump([f64; 3]),
}

impl TestFunction {
    pub fn parse(spec: &str) -> Result<Self, String> {
        let spec = spec.trim();
        if spec == "const" {
            return Ok(Self::Constant);
        }
        if let Some(rest) = spec.strip_prefix("Y:") {
            let (n, k) = rest
                .split_once(':')
                .ok_or_else(|| format!("expected Y:n:k, got {spec}"))?;
            let n: usize = n.parse().map_err(|_| format!("bad degree in {spec}"))?;
            let k: i64 = k.parse().map_err(|_| format!("bad order in {spec}"))?;
            return HarmonicIndex::new(n, k).map(Self::Harmonic).map_err(|e| e.to_string());
        }
        if let Some(rest) = spec.strip_prefix("gauss-bump:") {
            let parts: Vec<f64> = rest
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("bad vector in {spec}"))?;
            return match parts.as_slice() {
                [c] => Ok(Self::GaussBump([0.0, 0.0, *c])),
                [x, y, z] => Ok(Self::GaussBump([*x, *y, *z])),
                _ => Err(format!("gauss-bump takes 1 or 3 components, got {}", parts.len())),
            };
        }
        Err(format!(
            "unknown function {spec}; expected const, Y:n:k or gauss-bump:a"
        ))
    }

    pub fn eval(&self, p: &SpherePoint) -> Complex64 {
        match self {
            Self::Constant => Complex64::new(1.0, 0.0),
            Self::Harmonic(idx) => eval_y(*idx, p),
            Self::GaussBump(a) => {
                let [x, y, z] = p.xyz();
                Complex64::new((x * a[0] + y * a[1] + z * a[2]).exp(), 0.0)
            }
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Verification(_) => EXIT_VERIFY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&config, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message());
            failure.code()
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn grid_for(n: u32) -> Result<SphericalGrid, Failure> {
    Ok(build_grid(n as usize)?)
}

fn max_degree(n: u32, m: Option<u32>) -> Result<usize, Failure> {
    let m = m.unwrap_or(n);
    if m > n {
        return Err(Failure::Usage(format!(
            "--m {m} exceeds --N {n}; discrete orthogonality needs m <= N"
        )));
    }
    Ok(m as usize)
}

fn load_samples(source: &SourceArgs, grid: &SphericalGrid) -> Result<SampleVector, Failure> {
    match (&source.input, &source.function) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(io::parse_samples_csv(&text, grid.degree())?)
        }
        (None, Some(spec)) => {
            let f = TestFunction::parse(spec).map_err(Failure::Usage)?;
            Ok(SampleVector::from_fn(grid, |p| f.eval(p)))
        }
        _ => Err(Failure::Usage("exactly one of --in or --fn is required".into())),
    }
}

/// Deterministic pseudo-random coefficients for the `verify` round trip.
pub fn roundtrip_coefficients(max_degree: usize) -> CoeffVector {
    let mut rng = ChaCha8Rng::seed_from_u64(ROUNDTRIP_SEED);
    let entries = (0..coeff_len(max_degree))
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    CoeffVector::new(max_degree, entries).expect("sized by coeff_len")
}

/// Max-abs coefficient error after synthesize-then-analyze, relative to
/// the largest coefficient.
pub fn roundtrip_error(grid: &SphericalGrid, coeffs: &CoeffVector) -> crate::Result<f64> {
    let samples = synthesize_on_grid(coeffs, grid);
    let back = analyze(grid, &samples, coeffs.max_degree())?;
    let scale = coeffs.entries().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let err = back.max_abs_diff(coeffs);
    Ok(if scale > 0.0 { err / scale } else { err })
}

fn execute(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match &config.command {
        Command::Grid(args) => {
            let grid = grid_for(args.n)?;
            emit(&args.out, &io::grid_csv(&grid), stdout)
        }
        Command::Rule(args) => {
            let grid = grid_for(args.n)?;
            emit(&args.out, &io::rule_csv(grid.rule()), stdout)
        }
        Command::Verify(args) => {
            let m = max_degree(args.n, args.m)?;
            let grid = grid_for(args.n)?;
            let report = io::VerifyReport {
                grid_degree: grid.degree(),
                max_degree: m,
                gram_residual: gram_residual(&grid, m)?,
                roundtrip_error: roundtrip_error(&grid, &roundtrip_coefficients(m))?,
            };
            let text = match args.format {
                ReportFormat::Json => report.to_json(),
                ReportFormat::Csv => report.to_csv(),
            };
            emit(&args.out, &text, stdout)?;
            if report.gram_residual < VERIFY_THRESHOLD {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "Gram residual {} is not below {}",
                    io::format_f64(report.gram_residual),
                    io::format_f64(VERIFY_THRESHOLD)
                )))
            }
        }
        Command::Analyze(args) => {
            let m = max_degree(args.n, args.m)?;
            let grid = grid_for(args.n)?;
            let samples = load_samples(&args.source, &grid)?;
            let coeffs = analyze(&grid, &samples, m)?;
            emit(&args.out, &io::coeffs_json(&coeffs), stdout)
        }
        Command::Synthesize(args) => {
            let grid = grid_for(args.n)?;
            let text =
                fs::read_to_string(&args.input).map_err(|e| Failure::Io(format!("{}: {e}", args.input.display())))?;
            let coeffs = io::parse_coeffs_json(&text)?;
            let samples = synthesize_on_grid(&coeffs, &grid);
            emit(&args.out, &io::samples_csv(&samples), stdout)?;
            if coeffs.max_degree() >= 1 && coeffs.max_degree() <= grid.degree() {
                let err = roundtrip_error(&grid, &coeffs)?;
                let _ = writeln!(stderr, "roundtrip_error: {}", io::format_f64(err));
            } else {
                let _ = writeln!(
                    stderr,
                    "roundtrip_error: not available (max_degree {} exceeds N {})",
                    coeffs.max_degree(),
                    grid.degree()
                );
            }
            Ok(())
        }
        Command::Fit(args) => {
            let m = max_degree(args.n, args.m)?;
            let grid = grid_for(args.n)?;
            let samples = load_samples(&args.source, &grid)?;
            let fit = weighted_least_squares(&grid, &samples, m)?;
            emit(&args.out, &io::coeffs_json(&fit.coeffs), stdout)?;
            let _ = writeln!(
                stderr,
                "weighted_residual: {} (norm of sqrt(mu) * (f - fit) over the grid)",
                io::format_f64(fit.residual)
            );
            Ok(())
        }
        Command::Decompose(args) => {
            let grid = grid_for(args.n)?;
            if let Some(&top) = args.cutoffs.iter().max() {
                if top > grid.degree() {
                    return Err(Failure::Usage(format!("cutoff {top} exceeds --N {}", args.n)));
                }
            }
            let ladder = MultiresolutionLadder::new(args.cutoffs.clone(), grid.degree())?;
            let samples = load_samples(&args.source, &grid)?;
            let decomposition = decompose(&ladder, &grid, &samples)?;
            emit(&args.out, &io::decomposition_json(&decomposition), stdout)?;
            let _ = writeln!(
                stderr,
                "reconstruction_error: {}",
                io::format_f64(decomposition.reconstruction_error)
            );
            Ok(())
        }
    }
}
