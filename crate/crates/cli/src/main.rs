//! `swd`: simulate, extract, train, evaluate and run the spike-and-wave detector.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swd_core::report::SplitSelection;
use swd_core::ErrorKind;

const EXIT_INPUT: u8 = 3;
const EXIT_DEGENERATE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "swd",
    version,
    about = "Spike-and-wave discharge detection from moving-average residual statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labelled synthetic corpus
    Simulate(SimulateArgs),
    /// Compute pre- and post-residual (mu, sigma) features for each signal
    Extract(ExtractArgs),
    /// Fit the network and write the model and a per-epoch report
    Train(TrainArgs),
    /// Evaluate a model on one split or on everything
    Eval(EvalArgs),
    /// Score fixed-length windows of every signal in a corpus
    Detect(DetectArgs),
    /// Write the ROC curve of a model on a labelled feature set
    Roc(RocArgs),
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Run configuration (TOML); flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Generator seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Signals per class
    #[arg(long)]
    pub n_per_class: Option<usize>,
    /// Corpus CSV to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaArgs {
    /// Short moving-average half-width in samples
    #[arg(long = "ma-h1")]
    pub h1: Option<usize>,
    /// Long moving-average half-width in samples
    #[arg(long = "ma-h2")]
    pub h2: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub ma: MaArgs,
    /// Features CSV to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct DataSource {
    /// Features CSV produced by `extract`
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Corpus CSV; features are extracted on the fly
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    #[command(flatten)]
    pub source: DataSource,
    #[command(flatten)]
    pub ma: MaArgs,
    /// Seed for the split shuffle and weight initialisation
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub model_out: Option<PathBuf>,
    #[arg(long)]
    pub report_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub source: DataSource,
    /// train, validation, test or all
    #[arg(long, default_value = "test")]
    pub split: SplitSelection,
    /// Evaluation report to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Window length in seconds
    #[arg(long, default_value_t = swd_core::signal::DEFAULT_WINDOW_S)]
    pub window_s: f64,
    /// Hop between window starts; defaults to the window length
    #[arg(long)]
    pub hop_s: Option<f64>,
    /// Decision threshold; defaults to the model's
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Detections CSV to write
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time the run single-threaded and report throughput against real time
    #[arg(long)]
    pub bench: bool,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub source: DataSource,
    #[arg(long, default_value = "test")]
    pub split: SplitSelection,
    /// ROC CSV to write
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_line = std::iter::once("swd".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    match commands::run(cli.command, &command_line) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => EXIT_INPUT,
                ErrorKind::Degenerate => EXIT_DEGENERATE,
            })
        }
    }
}
