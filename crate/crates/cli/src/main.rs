//! `cvnn`: multiplication costs of complex-valued neural networks.
//!
//! Exit status: 0 ok, 1 verification failure, 2 invalid input, 3 not
//! applicable, 4 I/O error.

mod commands;
mod error;
mod plot;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvnn_core::ArchKind;

use spec::{ModeArg, Neurons};

#[derive(Parser)]
#[command(
    name = "cvnn",
    version,
    about = "Real-multiplication costs of complex-valued neural networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form training and inference cost of one network.
    Cost(CostArgs),
    /// Costs over a range of neuron counts, as CSV and optionally an SVG chart.
    Sweep(SweepArgs),
    /// Run random networks and compare metered counts with the closed forms.
    Verify(VerifyArgs),
    /// Reproduce the published application cost table.
    Reproduce(ReproduceArgs),
    /// Asymptotic complexity class of an architecture under a regime.
    Asym(AsymArgs),
}

fn parse_arch(s: &str) -> Result<ArchKind, String> {
    s.parse().map_err(|e: cvnn_core::CostError| e.to_string())
}

#[derive(Args)]
pub(crate) struct CostArgs {
    /// cvfnn, scfnn, mlmvn, crbf, fcrbf or ptrbf.
    #[arg(long, value_parser = parse_arch)]
    arch: Option<ArchKind>,
    /// P, complex inputs.
    #[arg(long)]
    inputs: Option<usize>,
    /// R, complex outputs.
    #[arg(long)]
    outputs: Option<usize>,
    /// N for a shallow network, or a comma-separated list of hidden (PT-RBF:
    /// Gaussian) layer sizes for a deep one.
    #[arg(long, value_parser = commands::parse_neurons)]
    neurons: Option<Neurons>,
    /// PT-RBF projection widths, one per layer or one per layer but the last.
    #[arg(long, value_delimiter = ',')]
    bottlenecks: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// JSON run config instead of the spec flags.
    #[arg(long, conflicts_with_all = ["arch", "inputs", "outputs", "neurons", "bottlenecks"])]
    config: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct SweepArgs {
    /// Architectures to include (default: all).
    #[arg(long, value_parser = parse_arch, value_delimiter = ',')]
    arch: Vec<ArchKind>,
    #[arg(long, default_value_t = 1)]
    inputs: usize,
    #[arg(long, default_value_t = 1)]
    outputs: usize,
    /// start:stop[:step], inclusive.
    #[arg(long)]
    n_range: String,
    #[arg(long, value_enum, default_value = "both")]
    mode: ModeArg,
    /// CSV output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Log-log SVG chart.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    /// Random specs per architecture.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, env = "CVNN_SEED", default_value_t = 0)]
    seed: u64,
    /// Add one to every formula value.
    #[arg(long, hide = true)]
    perturb_formula: bool,
}

#[derive(Args)]
pub(crate) struct ReproduceArgs {
    /// Use-case table JSON (default: the bundled table).
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct AsymArgs {
    /// cvfnn, scfnn, mlmvn, crbf, fcrbf or ptrbf.
    #[arg(long, value_parser = parse_arch)]
    arch: ArchKind,
    /// shallow-n-dominant, shallow-balanced, deep-n-dominant or deep-balanced.
    #[arg(long)]
    regime: String,
    /// Also fit the growth exponent from the exact costs.
    #[arg(long)]
    fit: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let result = match &cli.command {
        Command::Cost(a) => commands::cost_cmd(a, &mut out),
        Command::Sweep(a) => commands::sweep_cmd(a, &mut out),
        Command::Verify(a) => commands::verify_cmd(a, &mut out),
        Command::Reproduce(a) => commands::reproduce_cmd(a, &mut out),
        Command::Asym(a) => commands::asym_cmd(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
