use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Scenario, SynthError};
use crate::corpus::{write_corpus_line, write_signal_csv, TweetRecord, UserProfile};
use crate::demographics::{AgeBucket, GenderLabel, NameLabel};
use crate::firstperson::Label;

/// Paths of everything [`write_scenario`] produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFiles {
    pub corpus: PathBuf,
    pub baseline: PathBuf,
    pub offline: PathBuf,
    pub labels: PathBuf,
    pub names: PathBuf,
    pub cities: PathBuf,
    pub boxes: PathBuf,
    pub faces: PathBuf,
    pub population: PathBuf,
    pub truth: PathBuf,
}

impl ScenarioFiles {
    pub fn in_dir(dir: &Path) -> Self {
        ScenarioFiles {
            corpus: dir.join("corpus.jsonl"),
            baseline: dir.join("baseline.jsonl"),
            offline: dir.join("offline.csv"),
            labels: dir.join("labels.csv"),
            names: dir.join("names.csv"),
            cities: dir.join("cities.csv"),
            boxes: dir.join("boxes.csv"),
            faces: dir.join("faces.csv"),
            population: dir.join("population.csv"),
            truth: dir.join("truth.csv"),
        }
    }
}

fn jsonl(path: &Path, records: &[TweetRecord], profiles: &std::collections::BTreeMap<String, UserProfile>) -> Result<(), SynthError> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        let p = &profiles[&r.author_id];
        writeln!(w, "{}", write_corpus_line(r, p))?;
    }
    w.flush()?;
    Ok(())
}

fn csv_file(path: &Path) -> Result<csv::Writer<File>, SynthError> {
    Ok(csv::Writer::from_writer(File::create(path)?))
}

fn gender_str(g: GenderLabel) -> &'static str {
    match g {
        GenderLabel::Male => "male",
        GenderLabel::Female => "female",
        GenderLabel::Unknown => "unknown",
    }
}

fn age_str(a: AgeBucket) -> &'static str {
    match a {
        AgeBucket::Under24 => "under24",
        AgeBucket::AtLeast24 => "atLeast24",
        AgeBucket::Unknown => "unknown",
    }
}

/// Writes the corpus, reference corpus, offline series, labels, fixtures
/// and the truth sidecar into `dir`, creating it if needed.
pub fn write_scenario(s: &Scenario, dir: &Path) -> Result<ScenarioFiles, SynthError> {
    std::fs::create_dir_all(dir)?;
    let f = ScenarioFiles::in_dir(dir);
    jsonl(&f.corpus, &s.records, &s.profiles)?;
    jsonl(&f.baseline, &s.baseline_records, &s.baseline_profiles)?;
    write_signal_csv(&s.offline, File::create(&f.offline)?).map_err(|e| SynthError::Spec(e.to_string()))?;

    let mut w = csv_file(&f.labels)?;
    w.write_record(["tweet_id", "label"])?;
    for (id, l) in &s.labels {
        w.write_record([id.as_str(), if *l == Label::FirstPerson { "1" } else { "0" }])?;
    }
    w.flush()?;

    let mut w = csv_file(&f.names)?;
    w.write_record(["name", "label"])?;
    for (n, l) in &s.names {
        let l = match l {
            NameLabel::Male => "male",
            NameLabel::Female => "female",
            NameLabel::Ambiguous => "ambiguous",
        };
        w.write_record([n.as_str(), l])?;
    }
    w.flush()?;

    let mut w = csv_file(&f.cities)?;
    w.write_record(["city", "state"])?;
    for (c, st) in &s.cities {
        w.write_record([c.as_str(), st.as_str()])?;
    }
    w.flush()?;

    let mut w = csv_file(&f.boxes)?;
    w.write_record(["state", "min_lat", "min_lon", "max_lat", "max_lon"])?;
    for b in &s.boxes {
        w.write_record([b.state.as_str(), &b.min_lat.to_string(), &b.min_lon.to_string(), &b.max_lat.to_string(), &b.max_lon.to_string()])?;
    }
    w.flush()?;

    let mut w = csv_file(&f.faces)?;
    w.write_record(["image_ref", "age"])?;
    for (r, age) in &s.faces {
        w.write_record([r.as_str(), &age.map(|a| a.to_string()).unwrap_or_default()])?;
    }
    w.flush()?;

    let mut w = csv_file(&f.population)?;
    w.write_record(["state", "population"])?;
    for (st, p) in &s.population {
        w.write_record([st.as_str(), &p.to_string()])?;
    }
    w.flush()?;

    let mut w = csv_file(&f.truth)?;
    w.write_record(["user_id", "archetype", "gender", "age_bucket", "state", "spam"])?;
    for (id, t) in &s.truth {
        w.write_record([id.as_str(), t.archetype.as_str(), gender_str(t.gender), age_str(t.age), t.state.as_str(), &t.spam.to_string()])?;
    }
    w.flush()?;
    Ok(f)
}
