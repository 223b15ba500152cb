//! Pipeline configuration: a single JSON document.
//!
//! Relative paths resolve against the directory holding the config file.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use sensecast::cohorts::{CohortSpec, Predicate, WeightScheme};
use sensecast::corpus::CorpusSchema;
use sensecast::firstperson::ForestHyperparams;
use sensecast::nowcast::ModelSpec;
use sensecast::synth::ScenarioSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub data: DataSource,
    /// Keyword patterns, one per entry. Defaults to the scenario topic's
    /// list for synthetic data.
    #[serde(default)]
    pub keywords: Option<Vec<String>>,
    /// One pattern per line; takes precedence over `keywords`.
    #[serde(default)]
    pub keywords_file: Option<PathBuf>,
    /// Offset of the week-bin boundaries from UTC.
    #[serde(default)]
    pub utc_offset_seconds: i32,
    #[serde(default)]
    pub corpus_schema: SchemaOverrides,
    #[serde(default)]
    pub classifier: ClassifierConfig,
    #[serde(default = "default_model")]
    pub model: ModelSpec,
    #[serde(default = "default_min_train")]
    pub min_train: usize,
    #[serde(default)]
    pub cohorts: Vec<CohortEntry>,
    /// Cohort every other cohort is compared against; defaults to the first.
    #[serde(default)]
    pub baseline: Option<String>,
    #[serde(default = "default_in_flight")]
    pub face_max_in_flight: usize,
}

fn default_seed() -> u64 {
    2014
}

fn default_model() -> ModelSpec {
    ModelSpec::lagged_linear(1)
}

fn default_min_train() -> usize {
    25
}

fn default_in_flight() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub enum DataSource {
    /// Generate a scenario into `<out>/synth` and read it from there.
    Synth(ScenarioSpec),
    Files(FileInputs),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FileInputs {
    pub corpus: PathBuf,
    /// `week_start,value` CSV.
    pub offline: PathBuf,
    pub week_start: NaiveDate,
    pub n_weeks: usize,
    #[serde(default)]
    pub labels: Option<PathBuf>,
    pub names: PathBuf,
    pub cities: PathBuf,
    pub boxes: PathBuf,
    #[serde(default)]
    pub faces: Option<PathBuf>,
    #[serde(default)]
    pub population: Option<PathBuf>,
    /// General-terms corpus used for penetration rates.
    #[serde(default)]
    pub baseline_corpus: Option<PathBuf>,
}

/// Per-field JSON path overrides on top of the default wire schema.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SchemaOverrides {
    pub id: Option<String>,
    pub text: Option<String>,
    pub created_at: Option<String>,
    pub coordinates: Option<String>,
    pub user_id: Option<String>,
    pub user_name: Option<String>,
    pub user_screen_name: Option<String>,
    pub user_description: Option<String>,
    pub user_location: Option<String>,
    pub user_profile_image_url: Option<String>,
    pub user_followers_count: Option<String>,
    pub user_friends_count: Option<String>,
    pub user_statuses_count: Option<String>,
    pub user_favourites_count: Option<String>,
    pub user_listed_count: Option<String>,
    pub user_created_at: Option<String>,
    pub user_lang: Option<String>,
}

impl SchemaOverrides {
    pub fn schema(&self) -> CorpusSchema {
        let mut s = CorpusSchema::default();
        let pairs: [(&Option<String>, &mut String); 17] = [
            (&self.id, &mut s.id),
            (&self.text, &mut s.text),
            (&self.created_at, &mut s.created_at),
            (&self.coordinates, &mut s.coordinates),
            (&self.user_id, &mut s.user_id),
            (&self.user_name, &mut s.user_name),
            (&self.user_screen_name, &mut s.user_screen_name),
            (&self.user_description, &mut s.user_description),
            (&self.user_location, &mut s.user_location),
            (&self.user_profile_image_url, &mut s.user_profile_image_url),
            (&self.user_followers_count, &mut s.user_followers_count),
            (&self.user_friends_count, &mut s.user_friends_count),
            (&self.user_statuses_count, &mut s.user_statuses_count),
            (&self.user_favourites_count, &mut s.user_favourites_count),
            (&self.user_listed_count, &mut s.user_listed_count),
            (&self.user_created_at, &mut s.user_created_at),
            (&self.user_lang, &mut s.user_lang),
        ];
        for (o, slot) in pairs {
            if let Some(path) = o {
                *slot = path.clone();
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ClassifierConfig {
    #[serde(default = "default_trees")]
    pub n_trees: usize,
    #[serde(default)]
    pub max_features: Option<usize>,
    #[serde(default = "default_min_leaf")]
    pub min_leaf: usize,
    #[serde(default)]
    pub max_depth: Option<usize>,
    /// One stopword per line; the built-in English list otherwise.
    #[serde(default)]
    pub stopwords_file: Option<PathBuf>,
}

fn default_trees() -> usize {
    100
}

fn default_min_leaf() -> usize {
    1
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { n_trees: 100, max_features: None, min_leaf: 1, max_depth: None, stopwords_file: None }
    }
}

impl ClassifierConfig {
    pub fn hyperparams(&self) -> ForestHyperparams {
        ForestHyperparams { n_trees: self.n_trees, max_features: self.max_features, min_leaf: self.min_leaf, max_depth: self.max_depth }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CohortEntry {
    pub name: String,
    pub predicates: Vec<Predicate>,
    #[serde(default)]
    pub weight: Option<WeightScheme>,
    /// Re-run the cohort on random tweet subsamples.
    #[serde(default)]
    pub subsample: Option<Subsample>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Subsample {
    pub percent: f64,
    pub repeats: usize,
}

impl CohortEntry {
    pub fn spec(&self) -> CohortSpec {
        CohortSpec::new(&self.name, self.predicates.clone())
    }

    pub fn scheme(&self) -> WeightScheme {
        self.weight.unwrap_or(WeightScheme::Uniform)
    }

    /// Names of the series this entry produces: one per subsample repeat.
    pub fn series_names(&self) -> Vec<String> {
        match self.subsample {
            None => vec![self.name.clone()],
            Some(s) => (0..s.repeats).map(|i| format!("{}#r{i}", self.name)).collect(),
        }
    }
}

/// Rejected configuration, reported with the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// A parsed config plus the facts needed to reproduce it.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: Config,
    pub path: PathBuf,
    pub base_dir: PathBuf,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            ConfigError(format!("config: {inner}"))
        } else {
            ConfigError(format!("config field `{path}`: {inner}"))
        }
    })?;
    validate(&config)?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, ConfigError> {
    use sha2::{Digest, Sha256};
    let bytes = std::fs::read(path).map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| ConfigError(format!("config {} is not UTF-8", path.display())))?;
    let config = parse_config(text)?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedConfig { config, path: path.to_path_buf(), base_dir, sha256: hex::encode(Sha256::digest(&bytes)) })
}

fn validate(c: &Config) -> Result<(), ConfigError> {
    let err = |m: String| Err(ConfigError(m));
    match &c.data {
        DataSource::Synth(s) => {
            if let Err(e) = s.validate() {
                return err(format!("config field `data.synth`: {e}"));
            }
        }
        DataSource::Files(f) => {
            if f.n_weeks == 0 {
                return err("config field `data.files.nWeeks`: must be positive".into());
            }
            if c.keywords.is_none() && c.keywords_file.is_none() {
                return err("config field `keywords`: required when reading corpus files".into());
            }
        }
    }
    if let Some(k) = &c.keywords {
        if k.is_empty() {
            return err("config field `keywords`: must not be empty".into());
        }
        let lines: Vec<&str> = k.iter().map(String::as_str).collect();
        if let Err(e) = sensecast::corpus::KeywordPattern::from_list(&lines) {
            return err(format!("config field `keywords`: {e}"));
        }
    }
    if let Err(e) = c.model.validate() {
        return err(format!("config field `model`: {e}"));
    }
    if c.min_train == 0 {
        return err("config field `minTrain`: must be positive".into());
    }
    if c.classifier.n_trees == 0 || c.classifier.min_leaf == 0 || c.classifier.max_features == Some(0) {
        return err("config field `classifier`: nTrees, minLeaf and maxFeatures must be positive".into());
    }
    if c.face_max_in_flight == 0 {
        return err("config field `faceMaxInFlight`: must be positive".into());
    }

    let mut names = BTreeSet::new();
    for (i, entry) in c.cohorts.iter().enumerate() {
        let at = format!("config field `cohorts[{i}]` (cohort \"{}\")", entry.name);
        if let Err(e) = entry.spec().validate() {
            // The cohort error already names the entry.
            return err(format!("config field `cohorts[{i}]`: {e}"));
        }
        if entry.name.contains('#') {
            return err(format!("{at}: cohort names may not contain '#'"));
        }
        if !names.insert(entry.name.clone()) {
            return err(format!("{at}: duplicate cohort name"));
        }
        if let Some(s) = entry.subsample {
            if !(s.percent > 0.0 && s.percent <= 100.0) {
                return err(format!("{at}: subsample.percent must be in (0, 100]"));
            }
            if s.repeats == 0 {
                return err(format!("{at}: subsample.repeats must be positive"));
            }
        }
        if entry.scheme() == WeightScheme::GeoPenetration {
            if !entry.predicates.contains(&Predicate::LocationInferred) {
                return err(format!("{at}: geoPenetration weighting needs the locationInferred predicate"));
            }
            if let DataSource::Files(f) = &c.data {
                if f.population.is_none() || f.baseline_corpus.is_none() {
                    return err(format!("{at}: geoPenetration weighting needs data.files.population and data.files.baselineCorpus"));
                }
            }
        }
        if entry.spec().first_person_only() {
            if let DataSource::Files(f) = &c.data {
                if f.labels.is_none() {
                    return err(format!("{at}: firstPersonOnly needs data.files.labels to train the classifier"));
                }
            }
        }
    }
    if let Some(b) = &c.baseline {
        match c.cohorts.iter().find(|e| &e.name == b) {
            None => return err(format!("config field `baseline`: no cohort named \"{b}\"")),
            Some(e) if e.subsample.is_some() => {
                return err(format!("config field `baseline`: cohort \"{b}\" is subsampled and cannot be the baseline"))
            }
            Some(_) => {}
        }
    } else if let Some(first) = c.cohorts.first() {
        if first.subsample.is_some() {
            return err(format!("config field `baseline`: defaults to the first cohort \"{}\", which is subsampled", first.name));
        }
    }
    Ok(())
}

impl Config {
    /// Name of the reference cohort, if any cohorts are configured.
    pub fn baseline_name(&self) -> Option<&str> {
        self.baseline.as_deref().or_else(|| self.cohorts.first().map(|e| e.name.as_str()))
    }
}
