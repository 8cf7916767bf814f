//! Command-line front end: `cwstar`, `sharp`, `minimize`, `scan`, `sweep`,
//! `reconstruct`.
//!
//! Exit codes: 0 on success, 2 on domain, model, config or I/O errors, 3
//! when `--strict` is set and a solve did not converge.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use config::{ConfigFile, Format, DEFAULT_CUSTOM_GROWTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "inverse-fracture", version, about = "Sharp-interface limits of inverse-deformation fracture models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Surface-energy constant of a model.
    Cwstar(Invocation<CwstarParams>),
    /// Sharp minimizers of the foundation problem, crack tables and graphs.
    Sharp(Invocation<SharpParams>),
    /// Minimize one regularized energy.
    Minimize(Invocation<MinimizeParams>),
    /// Crack count and minimal energy across a range of loads.
    Scan(Invocation<ScanParams>),
    /// ε-sweep of a regularized energy against its sharp limit.
    Sweep(Invocation<SweepParams>),
    /// Deformation graph of a sharp inverse deformation read from a file.
    Reconstruct(Invocation<ReconstructParams>),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct Invocation<P: Args> {
    /// TOML file with `[model]`, `[output]` and per-command sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub params: P,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelArgs {
    /// Built-in model (`lj`, `quartic`) or `custom`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", alias = "name")]
    pub model: Option<String>,
    /// Ascending polynomial coefficients of W*(H) for a custom model.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
    /// Growth bound W*(H) >= C H^2 for H >= M: the constant C.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_c: Option<f64>,
    /// Growth bound threshold M.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputArgs {
    /// Directory for output files (created if missing).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Output formats, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<Format>>,
    /// Exit with code 3 when a solve does not converge.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CwstarParams {
    /// Absolute quadrature tolerance.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpParams {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimizeParams {
    /// `E` (alias `I`) or `V` (alias `U`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Rescaled foundation stiffness.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Unscaled foundation stiffness; sets μ = k/ε.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Grid intervals N.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<i64>,
    /// Projected-gradient tolerance.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_starts: Option<i64>,
    /// `multistart`, `homogeneous`, `sharp-n<k>-<A|B>` or `random-<i>`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    /// Grid field file used as the initial guess.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    /// `I` (alias `E`) or `V` (alias `U`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Strictly decreasing ε values, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_starts: Option<i64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructParams {
    /// Field file holding a sharp inverse deformation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr, summaries to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match commands::execute(cli.command, &mut stdout) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

/// Runs a parsed command, writing the summary to `out`.
pub fn execute(command: Command, out: &mut dyn std::io::Write) -> crate::Result<Outcome> {
    commands::execute(command, out)
}

/// What a successful command reports back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub all_converged: bool,
    pub strict: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.strict && !self.all_converged {
            EXIT_NOT_CONVERGED
        } else {
            EXIT_OK
        }
    }
}
