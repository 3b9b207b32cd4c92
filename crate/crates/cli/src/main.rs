use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Instantaneous complex phase and frequency of three-phase signals.
#[derive(Parser, Debug)]
#[command(name = "ifreq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a signal spec into a CSV trace.
    Generate(GenerateArgs),
    /// Per-sample phase and frequency by every formulation.
    Analyze(AnalyzeArgs),
    /// Check the equivalence relations between formulations.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Sample rate in Hz.
    #[arg(long, default_value_t = 10_000.0)]
    pub sample_rate: f64,
    /// Record length in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub duration: f64,
    /// Time of the first sample in seconds.
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Trace CSV (`t,va,vb,vc`).
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    pub input: Option<PathBuf>,
    /// Signal spec JSON, sampled on the grid given by the grid flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Park frame: `angle:<rad>`, `constant:<rad/s>` or `ramp:<rad/s>,<rad>`.
    #[arg(long, default_value = "angle:0")]
    pub frame: String,
    /// Nominal angular frequency in rad/s used to scale default tolerances
    /// and the torsion period. Taken from the spec, or estimated from the
    /// trace, when omitted.
    #[arg(long)]
    pub omega_o: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Comma-separated output formats: csv, json.
    #[arg(long, default_value = "csv,json")]
    pub format: String,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Tolerance on complex-frequency residuals, rad/s (default 1e-3 omega_o).
    #[arg(long)]
    pub tol_icf: Option<f64>,
    /// Tolerance on complex-phase residuals, rad (default 1e-3).
    #[arg(long)]
    pub tol_icp: Option<f64>,
    /// Relations to check, e.g. `EQ7,EQ13,EQ15`.
    #[arg(long, default_value = "EQ7,EQ12,EQ13,EQ15,EQ17")]
    pub relations: String,
}

/// Exit statuses: all relations hold, a relation is violated, bad usage or input.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("IFREQ_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Analyze(args) => commands::analyze(&args),
        Command::Compare(args) => commands::compare(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
