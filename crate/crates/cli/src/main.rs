mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

/// Three-state quantum walk: simulations, parameter sweeps, fits, scaling
/// collapses and analytic curves.
///
/// Every subcommand accepts `--config FILE`, a flat `key = value` file whose
/// keys are the long flag names. Flags given on the command line override
/// the file. Exit status is 0 on success, 1 for invalid input and 2 when a
/// computation fails.
#[derive(Debug, Parser)]
#[command(name = "qwalk3", version, args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one input state and write its SP/PR time series.
    Simulate(SimulateArgs),
    /// Run a (ρ, θ) grid of walks in parallel and write final SP/PR per point.
    Sweep(SweepArgs),
    /// Fit PR = a·t/(b + ln t), or a power law, to a time-series file.
    Fit(FitArgs),
    /// Collapse SP or PR curves from several θ onto a master curve.
    Collapse(CollapseArgs),
    /// Write the asymptotic velocity density, distribution and PR curve.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AmplitudeKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObservableArg {
    Sp,
    Pr,
}

/// θ given absolutely or as an offset from θ_c(ρ).
#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct ThetaArgs {
    /// Mixing angle θ in [0, π].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// θ − θ_c(ρ); used when --theta is absent.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta_offset: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Config file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coin parameter ρ in [0, 1]; the default is the Grover value 1/√3.
    #[arg(long, default_value_t = 1.0 / 3f64.sqrt())]
    pub rho: f64,
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Number of steps T.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Recorded steps: `every:N`, `geometric:F` or `times:t1,t2,...`.
    #[arg(long, default_value = "geometric:1.25")]
    pub cadence: String,
    /// Also record the right wavefront (x_m, delta, p_front).
    #[arg(long)]
    pub wavefront: bool,
    /// Steps at which to write the full distribution (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Vec<usize>,
    /// Amplitude arithmetic.
    #[arg(long, value_enum, default_value = "real")]
    pub amplitude: AmplitudeKind,
    /// Output time-series file. Snapshots go next to it as `<stem>_t<T>.csv`.
    #[arg(long, short, default_value = "series.csv")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ρ values: a comma list or `linspace:LO:HI:N`.
    #[arg(long, default_value = "linspace:0.05:0.95:61")]
    pub rho_grid: String,
    /// Absolute θ values, same forms as --rho-grid.
    #[arg(long, default_value = "linspace:1.5707963267948966:3.141592653589793:61")]
    pub theta_grid: String,
    /// Offsets from θ_c(ρ); replaces --theta-grid when given.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_offsets: Option<String>,
    /// Do not add θ_c(ρ) to the θ values at each ρ.
    #[arg(long)]
    pub no_locus: bool,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Points per persisted chunk; 0 chooses from the thread count.
    #[arg(long, default_value_t = 0)]
    pub chunk: usize,
    /// Continue an interrupted sweep from the rows already in --output.
    #[arg(long)]
    pub resume: bool,
    /// Output CSV; the plan is written to `<output>.json`.
    #[arg(long, short, default_value = "sweep.csv")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Time-series file (.csv or .json).
    #[arg(long, short)]
    pub input: PathBuf,
    /// `pr` fits the logarithmic law; `sp` fits a power law.
    #[arg(long, value_enum, default_value = "pr")]
    pub observable: ObservableArg,
    /// Fit PR with a pure power law instead of the logarithmic law.
    #[arg(long)]
    pub power: bool,
    #[arg(long, default_value_t = 100)]
    pub t_min: usize,
    #[arg(long, default_value_t = 10_000)]
    pub t_max: usize,
    /// Where to write the fit (.csv or .json); printed only when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CollapseArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Time-series files or directories holding them (comma separated).
    #[arg(long, short, value_delimiter = ',', required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "sp")]
    pub observable: ObservableArg,
    /// Base time τ₀; the curves at τ₀·{1, 2, 4, 8} are used.
    #[arg(long, default_value_t = 2000)]
    pub tau0: usize,
    /// Explicit times, replacing the τ₀ ladder.
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<usize>,
    /// Log offset b for the PR collapse. Without it b is fitted on the
    /// input closest to θ_c over [100, last time].
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub grid_points: usize,
    #[arg(long, short, default_value = "collapse.csv")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coin parameter ρ in (0, 1).
    #[arg(long, default_value_t = 1.0 / 3f64.sqrt())]
    pub rho: f64,
    /// Velocities at which to evaluate ω; must satisfy |ν| < ρ. Without it
    /// --points midpoints of (−ρ, ρ) are used.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Vec<f64>,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Steps at which to write the asymptotic distribution.
    #[arg(long, value_delimiter = ',', default_value = "10000")]
    pub distribution_times: Vec<usize>,
    /// Last step of the analytic PR curve.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value = "geometric:1.25")]
    pub cadence: String,
    /// Front-law prefactor c in δ(t) = c·t^p. Without it c is calibrated
    /// from a simulation at θ_c.
    #[arg(long)]
    pub front_c: Option<f64>,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub front_exponent: f64,
    /// Length of the calibration run.
    #[arg(long, default_value_t = 4000)]
    pub calibration_steps: usize,
    /// Directory for omega.csv, distribution_t<T>.csv and pr.csv.
    #[arg(long, short, default_value = "oracle")]
    pub output_dir: PathBuf,
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect(), &Cli::command()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
