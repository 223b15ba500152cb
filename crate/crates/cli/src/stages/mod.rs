//! Pipeline stages. Each stage reads the cached files of earlier stages
//! from the output directory and writes its own.

mod classify;
mod demographics;
mod evaluate;
mod ingest;
mod signal;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use serde::Serialize;

use crate::config::{DataSource, LoadedConfig};
use sensecast::corpus::{load_keyword_list, parse_corpus, KeywordPattern, ParsedCorpus, WeekGrid, FLU_KEYWORDS, UNEMPLOYMENT_KEYWORDS};
use sensecast::synth::{generate_scenario, write_scenario, ScenarioFiles, ScenarioSpec, Topic};

pub use evaluate::{read_signals_csv, reports_from_cases};

pub const SYNTH_DIR: &str = "synth";
pub const INGEST_TWEETS: &str = "ingest/keyword_tweets.jsonl";
pub const INGEST_SIGNAL: &str = "ingest/signal_all.csv";
pub const INGEST_STATS: &str = "ingest/stats.json";
pub const USERS: &str = "demographics/users.csv";
pub const PENETRATION: &str = "demographics/penetration.csv";
pub const MODEL: &str = "classify/model.json";
pub const TRAINING: &str = "classify/training.json";
pub const PREDICTIONS: &str = "classify/predictions.csv";
pub const SIGNALS: &str = "signal/signals.csv";
pub const CASES: &str = "backtest/cases.csv";
pub const SUMMARY: &str = "compare/summary.csv";
pub const REPORT_SVG: &str = "report/mape_boxplot.svg";
pub const REPORT_SUMMARY: &str = "report/summary.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Synth,
    Ingest,
    Demographics,
    ClassifyTrain,
    Classify,
    Signal,
    Backtest,
    Compare,
    Report,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Synth => "synth",
            Stage::Ingest => "ingest",
            Stage::Demographics => "demographics",
            Stage::ClassifyTrain => "classify-train",
            Stage::Classify => "classify",
            Stage::Signal => "signal",
            Stage::Backtest => "backtest",
            Stage::Compare => "compare",
            Stage::Report => "report",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Resolved input locations.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub corpus: PathBuf,
    pub offline: PathBuf,
    pub labels: Option<PathBuf>,
    pub names: PathBuf,
    pub cities: PathBuf,
    pub boxes: PathBuf,
    pub faces: Option<PathBuf>,
    pub population: Option<PathBuf>,
    pub baseline_corpus: Option<PathBuf>,
}

/// Everything a stage needs besides its cached inputs.
#[derive(Debug, Clone)]
pub struct Context {
    pub loaded: LoadedConfig,
    pub out: PathBuf,
    pub seed: u64,
    /// Face fixture override from the environment.
    pub face_stub: Option<PathBuf>,
}

impl Context {
    pub fn config(&self) -> &crate::config::Config {
        &self.loaded.config
    }

    /// The synthetic scenario with the master seed applied.
    pub fn scenario(&self) -> Option<ScenarioSpec> {
        match &self.config().data {
            DataSource::Synth(s) => Some(ScenarioSpec { seed: self.seed, ..s.clone() }),
            DataSource::Files(_) => None,
        }
    }

    pub fn grid(&self) -> WeekGrid {
        let (start, n) = match &self.config().data {
            DataSource::Synth(s) => (s.week_start, s.n_weeks),
            DataSource::Files(f) => (f.week_start, f.n_weeks),
        };
        WeekGrid::new(start, n).with_utc_offset(self.config().utc_offset_seconds)
    }

    pub fn inputs(&self) -> Inputs {
        match &self.config().data {
            DataSource::Synth(_) => {
                let f = ScenarioFiles::in_dir(&self.out.join(SYNTH_DIR));
                Inputs {
                    corpus: f.corpus,
                    offline: f.offline,
                    labels: Some(f.labels),
                    names: f.names,
                    cities: f.cities,
                    boxes: f.boxes,
                    faces: Some(f.faces),
                    population: Some(f.population),
                    baseline_corpus: Some(f.baseline),
                }
            }
            DataSource::Files(f) => {
                let r = |p: &Path| self.loaded.resolve(p);
                Inputs {
                    corpus: r(&f.corpus),
                    offline: r(&f.offline),
                    labels: f.labels.as_deref().map(r),
                    names: r(&f.names),
                    cities: r(&f.cities),
                    boxes: r(&f.boxes),
                    faces: f.faces.as_deref().map(r),
                    population: f.population.as_deref().map(r),
                    baseline_corpus: f.baseline_corpus.as_deref().map(r),
                }
            }
        }
    }

    pub fn keywords(&self) -> Result<Vec<KeywordPattern>> {
        let c = self.config();
        if let Some(p) = &c.keywords_file {
            let p = self.loaded.resolve(p);
            let f = File::open(&p).with_context(|| format!("opening keyword file {}", p.display()))?;
            return Ok(load_keyword_list(BufReader::new(f))?);
        }
        let lines: Vec<&str> = match (&c.keywords, self.scenario()) {
            (Some(k), _) => k.iter().map(String::as_str).collect(),
            (None, Some(s)) if s.topic == Topic::Unemployment => UNEMPLOYMENT_KEYWORDS.to_vec(),
            (None, Some(_)) => FLU_KEYWORDS.to_vec(),
            (None, None) => bail!("no keywords configured"),
        };
        Ok(KeywordPattern::from_list(&lines)?)
    }

    /// Open a configured input; synthetic inputs point at the `synth` stage.
    pub fn open_input(&self, path: &Path) -> Result<File> {
        if self.scenario().is_some() && !path.exists() {
            bail!("missing {}; run the `{}` stage first", path.display(), Stage::Synth);
        }
        File::open(path).with_context(|| format!("opening {}", path.display()))
    }

    pub fn output(&self, rel: &str) -> Result<PathBuf> {
        let p = self.out.join(rel);
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        Ok(p)
    }

    /// A cached file from an earlier stage.
    pub fn cached(&self, rel: &str, producer: Stage) -> Result<PathBuf> {
        let p = self.out.join(rel);
        if !p.is_file() {
            bail!("missing {}; run the `{producer}` stage first", p.display());
        }
        Ok(p)
    }

    /// Stages `all` runs for this config, in order.
    pub fn plan_all(&self) -> Vec<Stage> {
        let mut stages = Vec::new();
        if self.scenario().is_some() {
            stages.push(Stage::Synth);
        }
        stages.extend([Stage::Ingest, Stage::Demographics]);
        if self.inputs().labels.is_some() {
            stages.extend([Stage::ClassifyTrain, Stage::Classify]);
        }
        stages.extend([Stage::Signal, Stage::Backtest, Stage::Compare, Stage::Report]);
        stages
    }
}

pub fn run_stage(ctx: &Context, stage: Stage) -> Result<()> {
    match stage {
        Stage::Synth => synth(ctx),
        Stage::Ingest => ingest::run(ctx),
        Stage::Demographics => demographics::run(ctx),
        Stage::ClassifyTrain => classify::train(ctx),
        Stage::Classify => classify::apply(ctx),
        Stage::Signal => signal::run(ctx),
        Stage::Backtest => evaluate::backtest(ctx),
        Stage::Compare => evaluate::compare(ctx),
        Stage::Report => crate::report::run(ctx),
    }
}

fn synth(ctx: &Context) -> Result<()> {
    let Some(spec) = ctx.scenario() else {
        bail!("config data source is `files`; nothing to synthesize");
    };
    let scenario = generate_scenario(&spec)?;
    write_scenario(&scenario, &ctx.out.join(SYNTH_DIR))?;
    Ok(())
}

pub(crate) fn open_corpus(path: &Path, ctx: &Context) -> Result<ParsedCorpus> {
    let f = ctx.open_input(path)?;
    parse_corpus(BufReader::new(f), &ctx.config().corpus_schema.schema()).with_context(|| format!("reading corpus {}", path.display()))
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
