mod commands;
mod config;
mod error;
mod report;
mod seeds;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use blocktower_core::episode::PolicyKind;

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Stability prediction and next-placement selection for block stacking,
/// evaluated inside a seeded ground-truth simulator.
#[derive(Debug, Parser)]
#[command(name = "blocktower", version, max_term_width = 100)]
struct Cli {
    /// TOML experiment config; built-in defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,

    /// Worker threads for dataset scoring (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measure observation and placement error against known poses.
    Characterize {
        #[arg(long)]
        seed: u64,
        /// Pose pairs per channel (overrides datasets.characterize_pairs).
        #[arg(long)]
        pairs: Option<u32>,
    },
    /// Score the stability classifier on a generated tower dataset.
    EvalPrediction {
        #[arg(long)]
        seed: u64,
        /// Dataset size (overrides datasets.prediction_towers).
        #[arg(long)]
        towers: Option<u32>,
    },
    /// Compare placement policies over repeated stacking trials.
    EvalAction {
        #[arg(long)]
        seed: u64,
        /// Initial towers (overrides datasets.action_towers).
        #[arg(long)]
        towers: Option<u32>,
        /// Trials per tower (overrides datasets.action_trials).
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Both)]
        policy: PolicyArg,
        /// Zero actuation noise in both the world and the model.
        #[arg(long)]
        no_actuation_noise: bool,
    },
    /// Score the candidate grid over a fixed tower read from a TOML file.
    Heatmap {
        #[arg(long)]
        seed: u64,
        /// Tower file: one [[blocks]] table per block with keys x, y.
        #[arg(long, value_name = "PATH")]
        tower: PathBuf,
    },
    /// Run sequential stacking episodes, one placement per queued block.
    Episode {
        #[arg(long)]
        seed: u64,
        /// Queued blocks per episode (overrides episode.k_steps).
        #[arg(long)]
        steps: Option<u32>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Both)]
        policy: PolicyArg,
    },
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Cobra,
    Baseline,
    Both,
}

impl PolicyArg {
    fn kinds(self) -> Vec<PolicyKind> {
        match self {
            PolicyArg::Cobra => vec![PolicyKind::Cobra],
            PolicyArg::Baseline => vec![PolicyKind::Baseline],
            PolicyArg::Both => vec![PolicyKind::Cobra, PolicyKind::Baseline],
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let config = ExperimentConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Characterize { seed, pairs } => {
            commands::characterize::run(&config, &cli.out, seed, pairs)
        }
        Command::EvalPrediction { seed, towers } => {
            commands::prediction::run(&config, &cli.out, seed, towers)
        }
        Command::EvalAction { seed, towers, trials, policy, no_actuation_noise } => {
            let config =
                if no_actuation_noise { config.clone().without_actuation_noise() } else { config };
            commands::action::run(&config, &cli.out, seed, towers, trials, policy.kinds())
        }
        Command::Heatmap { seed, tower } => commands::heatmap::run(&config, &cli.out, seed, &tower),
        Command::Episode { seed, steps, policy } => {
            commands::episode::run(&config, &cli.out, seed, steps, policy.kinds())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
