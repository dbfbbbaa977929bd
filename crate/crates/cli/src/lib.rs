//! `ecsim`: figure sweeps, W-circuit runs, Bell optimizations and oracle checks.
//!
//! Numeric outputs (CSV and JSON) are deterministic for a fixed argument list.
//! When `--out` is given, a `RunManifest` with the argument list and timing is
//! written next to the output as `<out>.manifest.json`; `ecsim replay` reruns it.

mod commands;
mod manifest;

pub use commands::{figure_grid, repro_csv, Figure};
pub use manifest::RunManifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a requested check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for bad arguments or any error that stops the command.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ecsim", version, about = "Entangled coherent-state simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep α for one figure and write `alpha,bm_value,converged,restarts` CSV.
    Repro(ReproArgs),
    /// Run the heralded W-state circuit and report every detector branch.
    GenerateW(GenerateWArgs),
    /// Maximize a Bell–Mermin function over the 12 displacement settings.
    Optimize(OptimizeArgs),
    /// Compare analytic results against the truncated-Fock oracle.
    OracleCheck(OracleArgs),
    /// Apply a circuit script to a state file and dump the result.
    RunCircuit(RunCircuitArgs),
    /// Rerun the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl SignArg {
    pub fn ghz(self) -> ecs_core::measure::GhzSign {
        match self {
            SignArg::Plus => ecs_core::measure::GhzSign::Plus,
            SignArg::Minus => ecs_core::measure::GhzSign::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Parity,
    Threshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    States,
    Elements,
    Measure,
    Circuits,
    All,
}

#[derive(Clone, Debug, Args)]
pub struct OptimizerArgs {
    /// Random starts per α.
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the start box; defaults to an α-dependent value.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// GHZ sign `c₂ = ±c₁` (parity and threshold figures).
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateWArgs {
    /// Field amplitude `RE` or `RE,IM`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub gamma: num_complex::Complex64,
    /// Cross-Kerr phase.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    /// Report the heralded states after the final displacements.
    #[arg(long)]
    pub displace: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = ecs_core::fockoracle::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunCircuitArgs {
    /// Input state in the text dump format.
    #[arg(long)]
    pub state: PathBuf,
    /// Circuit script, one element per line.
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn parse_complex(s: &str) -> Result<num_complex::Complex64, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let im = parts.next().map(str::trim).unwrap_or("0");
    if parts.next().is_some() {
        return Err(format!("expected RE or RE,IM, got {s:?}"));
    }
    let re: f64 = re.parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.parse().map_err(|e| format!("{im:?}: {e}"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("non-finite amplitude {s:?}"));
    }
    Ok(num_complex::Complex64::new(re, im))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::run(cli.command, argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
