use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ergokit_core::experiments::{
    classify_crossing_pattern, run_beta_sweep, run_check, run_energy_entropy_diagram, run_entropy_gain_scatter,
    ExperimentConfig, ExperimentOutput,
};
use ergokit_core::Error;

/// Energy extraction and charging bounds under unital and feedback-controlled
/// quantum operations.
#[derive(Parser)]
#[command(name = "ergokit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy-entropy diagram for a cyclic drive
    Diagram(RunArgs),
    /// Bounds and sampled energy gains across a beta grid
    Sweep(RunArgs),
    /// Energy and entropy gains of thermal inputs at one beta
    Scatter(RunArgs),
    /// Crossing pattern of the free-energy gain against the nonunital lower bound
    Classify(RunArgs),
    /// Run the invariant suite
    Check(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: Overrides,
}

#[derive(Args)]
struct CheckArgs {
    /// Optional JSON config; only its seed is used
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Overrides,
}

#[derive(Args)]
struct Overrides {
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config sample count
    #[arg(long)]
    samples: Option<usize>,
    /// Output path; defaults to the config output_path, then stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

const DEFAULT_CHECK_SEED: u64 = 42;

enum Failure {
    Usage(String),
    Core(Error),
    ChecksFailed(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn load_config(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = overrides.samples {
        cfg.samples = samples;
    }
    Ok(cfg)
}

fn destination(overrides: &Overrides, cfg: Option<&ExperimentConfig>) -> Option<PathBuf> {
    overrides
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output_path.as_ref().map(PathBuf::from)))
}

fn write_text(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(output: &ExperimentOutput, path: Option<&Path>) -> Result<(), Failure> {
    write_text(&output.to_csv(), path)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Diagram(a) => {
            let cfg = load_config(&a.config, &a.common)?;
            emit(&run_energy_entropy_diagram(&cfg)?, destination(&a.common, Some(&cfg)).as_deref())
        }
        Command::Sweep(a) => {
            let cfg = load_config(&a.config, &a.common)?;
            emit(&run_beta_sweep(&cfg)?, destination(&a.common, Some(&cfg)).as_deref())
        }
        Command::Scatter(a) => {
            let cfg = load_config(&a.config, &a.common)?;
            emit(&run_entropy_gain_scatter(&cfg)?, destination(&a.common, Some(&cfg)).as_deref())
        }
        Command::Classify(a) => {
            let cfg = load_config(&a.config, &a.common)?;
            let (report, output) = classify_crossing_pattern(&cfg)?;
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            if let Some(path) = destination(&a.common, Some(&cfg)) {
                output.write_csv(&path)?;
            }
            Ok(())
        }
        Command::Check(a) => {
            let cfg = a.config.as_deref().map(|p| load_config(p, &a.common)).transpose()?;
            let seed = a.common.seed.or(cfg.as_ref().map(|c| c.seed)).unwrap_or(DEFAULT_CHECK_SEED);
            let log = run_check(seed);
            write_text(&log.render(), destination(&a.common, cfg.as_ref()).as_deref())?;
            match log.failures() {
                0 => Ok(()),
                n => Err(Failure::ChecksFailed(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invariant_violation() { 2 } else { 1 })
        }
        Err(Failure::ChecksFailed(n)) => {
            eprintln!("error: {n} invariant check(s) failed");
            ExitCode::from(2)
        }
    }
}
