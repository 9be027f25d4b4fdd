//! Experiment CLI: analyze spectra, sample success curves, sweep the
//! phase-estimation inversion, and compare the original vs modified search
//! pipelines, from named scenarios or spec files.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical failure.

mod output;
mod runner;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "diffsearch",
    about = "Quantum search with arbitrary diffusion operators: \
             simulation, spectral analysis, and cost comparison",
    version
)]
pub(crate) struct Cli {
    /// Override the scenario/spec seed.
    #[arg(long, global = true)]
    pub(crate) seed: Option<u64>,
    /// Write output files here (created if missing) instead of stdout only.
    #[arg(long, global = true)]
    pub(crate) out_dir: Option<PathBuf>,
    /// Stdout format for the primary result.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub(crate) format: Format,
    #[command(subcommand)]
    pub(crate) command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub(crate) struct Target {
    /// Built-in scenario name (grover4, grover64, skewed-A, phase-rotated,
    /// boundary) or a path to a scenario JSON file.
    #[arg(long, conflicts_with = "spec")]
    pub(crate) scenario: Option<String>,
    /// Path to a diffusion-spec JSON file.
    #[arg(long)]
    pub(crate) spec: Option<PathBuf>,
    /// Oracle angle φ in radians (overrides the scenario's value; default π
    /// for bare specs).
    #[arg(long)]
    pub(crate) phi: Option<f64>,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Spectral summary plus a predicted-vs-numeric residual table.
    Analyze {
        #[command(flatten)]
        target: Target,
    },
    /// Success-probability curve |⟨t|S^q|s⟩|² as CSV.
    Curve {
        #[command(flatten)]
        target: Target,
        /// Number of iterations to sample (default 10·⌈πB/4α⌉).
        #[arg(long)]
        q_max: Option<usize>,
    },
    /// Phase-estimated selective-inversion error/cost table.
    Pea {
        #[command(flatten)]
        target: Target,
        /// Single ancilla count.
        #[arg(long, conflicts_with = "sweep")]
        bits: Option<u32>,
        /// Inclusive ancilla range `b0:b1`.
        #[arg(long)]
        sweep: Option<String>,
        /// Error budget for the sizing rule (default 0.05).
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Run the original and/or modified pipeline and report outcomes.
    Compare {
        #[command(flatten)]
        target: Target,
        /// Per-call inversion error budget (default β/10).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Search ±2 around the predicted q_m for the best |⟨t|S^q|s⟩|.
        #[arg(long)]
        refine: bool,
    },
    /// Run every built-in scenario and write all reports to --out-dir.
    Batch,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub(crate) enum Mode {
    Original,
    Modified,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match runner::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
