//! Command-line reports for `pspin-core`: GSE tables, rate-function sweeps,
//! the spherical agreement checks and Monte Carlo experiments.
//!
//! [`run`] drives everything and returns the process exit code, so the
//! binary and the tests share one code path.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pspin_core::SpinSet;

mod commands;
pub mod format;

pub use format::{fmt_num, round_sig, ReportRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CONSISTENCY: i32 = 4;
/// Largest order accepted by the sweeps.
pub const P_LIMIT: u32 = 200;

#[derive(Debug, Parser)]
#[command(
    name = "pspin",
    version,
    about = "Ground-state energies of multipartite p-spin models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First- and second-level GSE values for a range of p.
    Gse(GseArgs),
    /// Rate function sampled on a u grid.
    Rate(RateArgs),
    /// Cross-checks of the spherical value against the fixed-point and
    /// residual formulations.
    Agreement(AgreementArgs),
    /// Monte Carlo experiments at finite n.
    Empirical(EmpiricalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct GseArgs {
    /// Spin set; both when omitted.
    #[arg(long)]
    pub set: Option<SpinSet>,
    #[arg(long, default_value_t = 2)]
    pub p_min: u32,
    #[arg(long, default_value_t = 30)]
    pub p_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub set: SpinSet,
    #[arg(long)]
    pub p: u32,
    /// Defaults to the start of the rate function's domain.
    #[arg(long, allow_hyphen_values = true)]
    pub u_from: Option<f64>,
    /// Defaults to one past the GSE.
    #[arg(long, allow_hyphen_values = true)]
    pub u_to: Option<f64>,
    /// Number of grid points, ends included.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AgreementArgs {
    #[arg(long, default_value_t = 3)]
    pub p_min: u32,
    #[arg(long, default_value_t = 20)]
    pub p_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmpiricalMode {
    /// Maxima of sampled (or given) tensors.
    Max,
    /// Lower estimate, direct estimate and analytic upper bound side by side.
    Sandwich,
    /// Upper tail of the normalized single-vector maximum.
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Brute,
    Alternating,
}

#[derive(Debug, Args)]
pub struct EmpiricalArgs {
    #[arg(value_enum)]
    pub mode: EmpiricalMode,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = SpinSet::Ising)]
    pub set: SpinSet,
    #[arg(long, default_value_t = 0.5)]
    pub c3: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Brute force for Ising and alternating ascent for the sphere when omitted.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Threshold for `tail`.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub u: f64,
    /// Explicit row-major tensor entries for `max`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub entries: Option<Vec<f64>>,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long)]
    pub budget_evals: Option<u128>,
    #[arg(long)]
    pub budget_entries: Option<u128>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pspin_core::Error),
    #[error("output failed: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pspin_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Core(E::Domain(_)) => EXIT_USAGE,
            CliError::Core(E::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(_) | CliError::Io(_) => EXIT_CONSISTENCY,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and notes and errors to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => EXIT_OK,
        // a closed reader (`| head`) is not an error of ours
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(
    command: &Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Gse(a) => commands::gse(a, out),
        Command::Rate(a) => commands::rate(a, out, err),
        Command::Agreement(a) => commands::agreement(a, out),
        Command::Empirical(a) => commands::empirical(a, out, err),
    }
}
