//! Batch front-end: run simulation scenarios, parameter sweeps, and coupling
//! searches described by JSON configs, writing CSV/JSON results.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 1 I/O failure.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ScenarioConfig;
use run::{default_model_path, run_scenario, run_search, run_sweep, SweepAxis};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl From<oscnet::Error> for CliError {
    fn from(e: oscnet::Error) -> Self {
        match e {
            oscnet::Error::InvalidArgument(msg) => CliError::Config(msg),
            oscnet::Error::NumericalFailure(msg) => CliError::Numerical(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "oscnet",
    version,
    about = "Gaussian-state dynamics on engineered oscillator networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its time-series CSV
    Simulate {
        /// JSON scenario config
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (overrides the config's output_path)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter axis and write a summary CSV with oracle columns
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Axis to sweep: z, n-arms or c
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hill-climb bond strengths; write the objective trace CSV and the
    /// best-model JSON
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Random seed (overrides the config's seed)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Best-model JSON path (default: trace path with .model.json)
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
}

fn output_path(flag: Option<PathBuf>, config: &ScenarioConfig) -> Result<PathBuf, CliError> {
    flag.or_else(|| config.output_path.clone()).ok_or_else(|| {
        CliError::Config("no output path: pass --out or set output_path in the config".into())
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let config = ScenarioConfig::load(&config)?;
            let out = output_path(out, &config)?;
            run_scenario(&config, &out)
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
        } => {
            let config = ScenarioConfig::load(&config)?;
            let out = output_path(out, &config)?;
            run_sweep(&config, axis, &values, &out)
        }
        Command::Search {
            config,
            seed,
            out,
            model_out,
        } => {
            let config = ScenarioConfig::load(&config)?;
            let out = output_path(out, &config)?;
            let model_out = model_out.unwrap_or_else(|| default_model_path(&out));
            run_search(&config, seed, &out, &model_out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
