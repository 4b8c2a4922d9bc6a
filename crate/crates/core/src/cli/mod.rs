//! `qchaos` command line: one subcommand per diagnostic, CSV or JSON tables
//! plus a JSON metadata sidecar per run.

mod commands;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algorithms::{grover_iterations, MAX_QUBITS};
use crate::perturbations::{PerturbationKind, PerturbationSpec, MAX_DIGITAL_ITERATIONS};
use crate::Error;

pub use output::{Cell, Table};

#[derive(Debug, Parser)]
#[command(
    name = "qchaos",
    version,
    about = "Chaos diagnostics for simulated Grover and QFT unitaries"
)]
pub struct Cli {
    /// Worker thread cap (defaults to all cores).
    #[arg(long, env = "QCHAOS_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenphases and unfolded nearest-neighbour spacings.
    Spectrum(CommonArgs),
    /// Eigenvector components against the Porter-Thomas law.
    EvecStats(EvecStatsArgs),
    /// Mean symmetric / antisymmetric parts of U_G over a qubit range.
    SymSplit(SymSplitArgs),
    /// Fidelity series against a perturbed copy and its Fourier magnitudes.
    Overlap(CommonArgs),
    /// Unfolded angle histogram of a perturbed ensemble with random baseline.
    Angles(CommonArgs),
    /// Normalized matrix error of independent perturbations versus epsilon.
    ErrorSweep(ErrorSweepArgs),
    /// Root-of-unity defects of the spectrum.
    Roots(RootsArgs),
    /// QFT circuit identities and approximate-QFT error versus cutoff.
    QftCheck(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Grover,
    Qft,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Grover => "grover",
            Algorithm::Qft => "qft",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Seeded Haar rotation inside every degenerate eigenspace.
    Randomized,
    /// Gram-Schmidt of projected unit vectors in index order.
    Canonical,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = Algorithm::Grover)]
    pub algorithm: Algorithm,
    /// Number of qubits.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Marked index (Grover only).
    #[arg(long, default_value_t = 2)]
    pub xi: usize,
    /// Perturbation strength; 0.01 for independent angle ensembles, else 0.1.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// independent | digital | qft-phase; follows the algorithm when omitted.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<PerturbationKind>,
    /// Length k_max of overlap series.
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,
    /// Number of perturbed matrices in an angle ensemble.
    #[arg(long, default_value_t = 50)]
    pub ensemble: usize,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct EvecStatsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = Basis::Randomized)]
    pub basis: Basis,
}

#[derive(Debug, Clone, Args)]
pub struct SymSplitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ErrorSweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Perturbations per strength.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-4, 1e-3, 1e-2, 1e-1])]
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RootsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest root order m.
    #[arg(long, default_value_t = 8)]
    pub max_root: usize,
}

fn parse_kind(s: &str) -> std::result::Result<PerturbationKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Validated configuration shared by every subcommand; this is what the
/// metadata sidecar records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub subcommand: &'static str,
    pub algorithm: Algorithm,
    pub n: usize,
    pub xi: Option<usize>,
    pub perturbation: PerturbationSpec,
    pub iterations: usize,
    pub ensemble_size: usize,
    pub bins: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn from_common(subcommand: &'static str, a: &CommonArgs) -> Result<Self, CliError> {
        let kind = a.kind.unwrap_or(match a.algorithm {
            Algorithm::Grover => PerturbationKind::Independent,
            Algorithm::Qft => PerturbationKind::QftPhase,
        });
        let epsilon = a.epsilon.unwrap_or(
            if subcommand == "angles" && kind == PerturbationKind::Independent {
                0.01
            } else {
                0.1
            },
        );
        let min_n = match a.algorithm {
            Algorithm::Grover => 2,
            Algorithm::Qft => 1,
        };
        if a.n < min_n || a.n > MAX_QUBITS {
            return Err(CliError::usage(format!(
                "--n must lie in {min_n}..={MAX_QUBITS} for {}, got {}",
                a.algorithm.name(),
                a.n
            )));
        }
        let xi = match a.algorithm {
            Algorithm::Grover if a.xi >= 1 << a.n => {
                return Err(CliError::usage(format!(
                    "--xi must be below N = {}, got {}",
                    1usize << a.n,
                    a.xi
                )));
            }
            Algorithm::Grover => Some(a.xi),
            Algorithm::Qft => None,
        };
        match (a.algorithm, kind) {
            (Algorithm::Grover, PerturbationKind::QftPhase)
            | (Algorithm::Qft, PerturbationKind::Independent | PerturbationKind::Digital) => {
                return Err(CliError::usage(format!(
                    "kind {kind} does not apply to {}",
                    a.algorithm.name()
                )));
            }
            _ => {}
        }
        let perturbation = PerturbationSpec::new(kind, epsilon, a.seed)
            .map_err(|e| CliError::usage(e.to_string()))?;
        if a.bins == 0 {
            return Err(CliError::usage("--bins must be positive"));
        }
        Ok(Self {
            subcommand,
            algorithm: a.algorithm,
            n: a.n,
            xi,
            perturbation,
            iterations: a.iterations,
            ensemble_size: a.ensemble,
            bins: a.bins,
            seed: a.seed,
            output: a.out.clone(),
            format: a.format,
        })
    }

    fn require_grover(&self) -> Result<usize, CliError> {
        match self.xi {
            Some(xi) => Ok(xi),
            None => Err(CliError::usage(format!(
                "{} needs --algorithm grover",
                self.subcommand
            ))),
        }
    }

    fn validate_for(&self) -> Result<(), CliError> {
        match self.subcommand {
            "overlap" => {
                if self.perturbation.kind == PerturbationKind::Digital {
                    return Err(CliError::usage(
                        "overlap takes a single perturbation; use --kind independent",
                    ));
                }
                if self.iterations < crate::dynamics::MIN_FOURIER_LENGTH {
                    return Err(CliError::usage(format!(
                        "--iterations must be at least {}",
                        crate::dynamics::MIN_FOURIER_LENGTH
                    )));
                }
                if self.algorithm == Algorithm::Qft && self.n < 2 {
                    return Err(CliError::usage("perturbed QFT needs --n >= 2"));
                }
            }
            "angles" => {
                if self.perturbation.kind == PerturbationKind::Digital {
                    let p = grover_iterations(self.n);
                    if p > MAX_DIGITAL_ITERATIONS {
                        return Err(CliError::usage(format!(
                            "digital family for n = {} has 2^{p} members; at most p = {MAX_DIGITAL_ITERATIONS} supported",
                            self.n
                        )));
                    }
                } else if self.ensemble_size < 2 {
                    return Err(CliError::usage("--ensemble must be at least 2"));
                }
                if self.algorithm == Algorithm::Qft && self.n < 2 {
                    return Err(CliError::usage("perturbed QFT needs --n >= 2"));
                }
            }
            "qft-check" if self.algorithm != Algorithm::Qft => {
                return Err(CliError::usage("qft-check needs --algorithm qft"));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Failure of a run, carrying its exit status: 2 for rejected arguments,
/// 1 for numerical or I/O failures.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(Error),
    Io(std::io::Error),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid arguments: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o failure: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonUnitaryInput { .. }
            | Error::NoConvergence(_)
            | Error::ZeroVector
            | Error::EmptySample
            | Error::DomainError { .. } => CliError::Numerical(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Paths written by a successful run, data tables first, sidecar last.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
}

pub fn execute(cli: &Cli) -> Result<RunReport, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::usage("thread count must be positive"));
        }
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    commands::dispatch(&cli.command)
}

/// Parses `argv` (program name first), runs it and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("qchaos: {e}");
            e.exit_code()
        }
    }
}
