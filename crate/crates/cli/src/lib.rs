//! Configuration-driven runner for the sensecast pipeline.
//!
//! Exit codes: 0 on success, 1 when a stage fails, 2 when the command line
//! or the configuration is invalid.

pub mod config;
pub mod manifest;
pub mod report;
pub mod stages;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{load_config, ConfigError};
use stages::{run_stage, Context, Stage};

pub const FACE_STUB_ENV: &str = "SENSECAST_FACE_STUB";

#[derive(Debug, Parser)]
#[command(name = "sensecast", version, about = "Social-sensor now-casting pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Pipeline configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for stage files and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Parse the corpus, match keywords, drop spam and write the all-users signal.
    Ingest,
    /// Infer gender, age bucket and state per user; compute penetration rates.
    Demographics,
    /// Train the first-person classifier on the label file.
    ClassifyTrain,
    /// Label every ingested tweet with the trained classifier.
    Classify,
    /// Build one weekly signal per configured cohort.
    Signal,
    /// Run the split-plan backtest for every cohort signal.
    Backtest,
    /// Compare every cohort against the baseline cohort.
    Compare,
    /// Write the summary CSV and the MAPE box plot.
    Report,
    /// Generate the synthetic scenario described in the config.
    Synth,
    /// Run every applicable stage in order.
    All,
}

impl Command {
    fn stages(self, ctx: &Context) -> Vec<Stage> {
        match self {
            Command::Ingest => vec![Stage::Ingest],
            Command::Demographics => vec![Stage::Demographics],
            Command::ClassifyTrain => vec![Stage::ClassifyTrain],
            Command::Classify => vec![Stage::Classify],
            Command::Signal => vec![Stage::Signal],
            Command::Backtest => vec![Stage::Backtest],
            Command::Compare => vec![Stage::Compare],
            Command::Report => vec![Stage::Report],
            Command::Synth => vec![Stage::Synth],
            Command::All => ctx.plan_all(),
        }
    }
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Stage { stage: Stage, error: anyhow::Error },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Stage { .. } => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "invalid configuration: {e}"),
            Failure::Stage { stage, error } => write!(f, "stage `{stage}` failed: {error:#}"),
        }
    }
}

/// Execute a parsed command line. `face_stub` is the value of
/// [`FACE_STUB_ENV`], passed in so callers control the environment.
pub fn execute(cli: &Cli, face_stub: Option<PathBuf>) -> Result<Vec<Stage>, Failure> {
    let Some(config_path) = &cli.config else {
        return Err(Failure::Config(ConfigError("--config is required".into())));
    };
    if cli.threads == Some(0) {
        return Err(Failure::Config(ConfigError("--threads must be positive".into())));
    }
    let loaded = load_config(config_path).map_err(Failure::Config)?;
    let seed = cli.seed.unwrap_or(loaded.config.seed);
    let ctx = Context { loaded, out: cli.out.clone(), seed, face_stub };
    let stages = cli.command.stages(&ctx);

    let body = || -> Result<(), Failure> {
        std::fs::create_dir_all(&ctx.out)
            .and_then(|_| manifest::write_manifest(&ctx, &stages, cli.threads))
            .map_err(|e| Failure::Stage { stage: stages[0], error: e.into() })?;
        for &stage in &stages {
            run_stage(&ctx, stage).map_err(|error| Failure::Stage { stage, error })?;
        }
        Ok(())
    };
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Stage { stage: stages[0], error: e.into() })?;
            pool.install(body)?;
        }
        None => body()?,
    }
    Ok(stages)
}

/// Parse `args`, run, report on stderr and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let face_stub = std::env::var_os(FACE_STUB_ENV).map(PathBuf::from);
    match execute(&cli, face_stub) {
        Ok(_) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}
