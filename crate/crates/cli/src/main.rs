mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fvrecon::Error;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "fvrecon",
    version,
    about = "Third-order finite-volume reconstruction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its final solution or TV history.
    Run(RunArgs),
    /// Errors and observed orders over schemes and grid sizes.
    Convergence(ConvergenceArgs),
    /// H(delta_minus, delta_plus) over a square of slope pairs.
    Surface(SurfaceArgs),
    /// H along lines of fixed delta_plus.
    Section(SectionArgs),
    /// Compute the high-resolution Shu-Osher reference solution.
    Reference(ReferenceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RunProduct {
    /// Final cell averages (primitive variables for Euler).
    Solution,
    /// Total variation of the first component after every step.
    Tv,
}

#[derive(Args, Debug, Default)]
pub struct Setup {
    /// Catalog entry to start from.
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    /// Run file to start from.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scheme name such as h3l-c, ct-c:r=10 or weno-yc:C=20.67.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Number of cells.
    #[arg(long)]
    pub n: Option<usize>,
    /// CFL number in (0, 1].
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Final time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// max |u0''| for the combined limiters.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fixed WENO epsilon.
    #[arg(long, conflicts_with = "eps_policy")]
    pub eps: Option<f64>,
    /// WENO-YC epsilon rule: fixed:E, yc:C=c or pow:K=k,q=q.
    #[arg(long)]
    pub eps_policy: Option<String>,
    /// Measure errors on cells with centres in A,B.
    #[arg(long, allow_hyphen_values = true, value_name = "A,B")]
    pub error_range: Option<String>,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Destination file; standard output when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub setup: Setup,
    #[arg(long, value_enum, default_value_t = RunProduct::Solution)]
    pub out: RunProduct,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub setup: Setup,
    /// Comma-separated scheme names; defaults to --scheme, then to the
    /// configuration's list.
    #[arg(long)]
    pub schemes: Option<String>,
    /// Comma-separated cell counts; defaults to the configuration's list.
    #[arg(long)]
    pub n_list: Option<String>,
    /// Reference solution file for problems without an exact solution.
    /// For shu-osher it is computed and cached here when missing or stale.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct LimiterArgs {
    /// Scheme name such as h3l or weno-js:eps=1e-6.
    #[arg(long)]
    pub scheme: String,
    /// Cell width seen by the combined limiters and grid-scaled epsilons.
    #[arg(long, default_value_t = 0.1)]
    pub dx: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Fixed WENO epsilon.
    #[arg(long, conflicts_with = "eps_policy")]
    pub eps: Option<f64>,
    #[arg(long, default_value = "fixed:1e-6")]
    pub eps_policy: String,
    /// Interval of delta_minus (and of delta_plus for surfaces).
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value = "-2,2",
        value_name = "A,B"
    )]
    pub range: String,
    /// Samples per axis.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub limiter: LimiterArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SectionArgs {
    #[command(flatten)]
    pub limiter: LimiterArgs,
    /// Comma-separated fixed values of delta_plus.
    #[arg(long, allow_hyphen_values = true, default_value = "2,1,0.5,0.1")]
    pub delta_plus: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ReferenceArgs {
    #[arg(long, short = 'o')]
    pub output: PathBuf,
    /// Recompute even if the file already holds this reference.
    #[arg(long)]
    pub force: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PositivityAbort { .. }
        | Error::Positivity { .. }
        | Error::NonphysicalState { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

/// Machine-readable form of `e` for the error stream.
pub fn diagnostic(e: &Error) -> serde_json::Value {
    let message = e.to_string();
    match *e {
        Error::PositivityAbort {
            step,
            time,
            cell,
            variable,
            value,
        } => json!({
            "error": "positivity_abort",
            "message": message,
            "step": step,
            "time": time,
            "cell": cell,
            "variable": variable.to_string(),
            "value": value,
        }),
        Error::Positivity {
            cell,
            variable,
            value,
        } => json!({
            "error": "positivity",
            "message": message,
            "cell": cell,
            "variable": variable.to_string(),
            "value": value,
        }),
        Error::Io(_) => json!({ "error": "io", "message": message }),
        _ => json!({ "error": "config", "message": message }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => commands::run(&a),
        Command::Convergence(a) => commands::convergence(&a),
        Command::Surface(a) => commands::surface(&a),
        Command::Section(a) => commands::section(&a),
        Command::Reference(a) => commands::reference(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", diagnostic(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
