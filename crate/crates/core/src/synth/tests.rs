use std::collections::BTreeSet;
use std::fs;

use super::*;
use crate::corpus::{parse_corpus, tag_records, weekly_unique_user_counts, CorpusSchema, KeywordPattern, TweetRecord, WeekGrid, FLU_KEYWORDS};
use crate::demographics::{read_population_csv, Gazetteer, NameDictionary, StubFaceClient};
use crate::firstperson::read_labels_csv;
use crate::stats::spearman_rho;

fn small(seed: u64) -> ScenarioSpec {
    ScenarioSpec {
        n_weeks: 30,
        population: Population { personal: 400, organization: 30, topic_focused: 30, bot: 80 },
        n_labels: 200,
        n_baseline_users: 300,
        seed,
        ..ScenarioSpec::default()
    }
}

fn keyword_signal(s: &Scenario, only: Option<&BTreeSet<String>>) -> Vec<f64> {
    let mut records = s.records.clone();
    tag_records(&mut records, &KeywordPattern::from_list(FLU_KEYWORDS).unwrap());
    let kept: Vec<TweetRecord> = records
        .into_iter()
        .filter(|r| !r.topic_keywords_hit.is_empty() && only.is_none_or(|ids| ids.contains(&r.tweet_id)))
        .collect();
    let grid = WeekGrid::new(s.spec.week_start, s.spec.n_weeks);
    weekly_unique_user_counts(&kept, &grid).unwrap().values
}

#[test]
fn same_seed_same_bytes() {
    let dir = std::env::temp_dir().join(format!("sensecast-synth-{}", std::process::id()));
    let a = write_scenario(&generate_scenario(&small(7)).unwrap(), &dir.join("a")).unwrap();
    let b = write_scenario(&generate_scenario(&small(7)).unwrap(), &dir.join("b")).unwrap();
    let c = write_scenario(&generate_scenario(&small(8)).unwrap(), &dir.join("c")).unwrap();
    assert_eq!(fs::read(&a.corpus).unwrap(), fs::read(&b.corpus).unwrap());
    assert_eq!(fs::read(&a.truth).unwrap(), fs::read(&b.truth).unwrap());
    assert_ne!(fs::read(&a.corpus).unwrap(), fs::read(&c.corpus).unwrap());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn written_files_load_cleanly() {
    let s = generate_scenario(&small(3)).unwrap();
    let dir = std::env::temp_dir().join(format!("sensecast-synth-load-{}", std::process::id()));
    let f = write_scenario(&s, &dir).unwrap();

    let parsed = parse_corpus(std::io::BufReader::new(fs::File::open(&f.corpus).unwrap()), &CorpusSchema::default()).unwrap();
    assert_eq!(parsed.skipped, 0);
    assert_eq!(parsed.records, s.records);
    assert_eq!(parsed.profiles, s.profiles);
    let base = parse_corpus(std::io::BufReader::new(fs::File::open(&f.baseline).unwrap()), &CorpusSchema::default()).unwrap();
    assert_eq!(base.records.len(), 300);

    let labels = read_labels_csv(fs::File::open(&f.labels).unwrap()).unwrap();
    assert_eq!(labels.len(), 200);
    let ids: BTreeSet<&str> = s.records.iter().map(|r| r.tweet_id.as_str()).collect();
    assert!(labels.keys().all(|id| ids.contains(id.as_str())));

    assert!(!NameDictionary::from_csv(fs::File::open(&f.names).unwrap()).unwrap().is_empty());
    Gazetteer::from_csv(fs::File::open(&f.cities).unwrap(), fs::File::open(&f.boxes).unwrap()).unwrap();
    StubFaceClient::from_csv(fs::File::open(&f.faces).unwrap()).unwrap();
    assert_eq!(read_population_csv(fs::File::open(&f.population).unwrap()).unwrap().len(), 11);
    assert_eq!(crate::corpus::read_signal_csv(fs::File::open(&f.offline).unwrap()).unwrap(), s.offline);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn first_person_tweets_come_from_personal_and_topic_accounts() {
    let s = generate_scenario(&small(4)).unwrap();
    for r in s.records.iter().filter(|r| s.first_person.contains(&r.tweet_id)) {
        let a = s.truth[&r.author_id].archetype;
        assert!(matches!(a, Archetype::Personal | Archetype::TopicFocused), "{a:?}");
    }
}

#[test]
fn clean_population_tracks_latent() {
    let mut spec = small(11);
    spec.population = Population { personal: 1500, organization: 0, topic_focused: 0, bot: 0 };
    let s = generate_scenario(&spec).unwrap();
    let rho = spearman_rho(&keyword_signal(&s, None), &s.latent).unwrap();
    assert!(rho > 0.9, "rho = {rho}");
}

#[test]
fn bot_heavy_population_favours_first_person_signal() {
    let mut spec = small(12);
    spec.population = Population { personal: 400, organization: 0, topic_focused: 0, bot: 2000 };
    let s = generate_scenario(&spec).unwrap();
    let all = spearman_rho(&keyword_signal(&s, None), &s.offline.values).unwrap();
    let fp = spearman_rho(&keyword_signal(&s, Some(&s.first_person)), &s.offline.values).unwrap();
    assert!(fp > all + 0.2, "first-person {fp} vs all {all}");
}

#[test]
fn rejects_bad_specs() {
    let mut spec = small(1);
    spec.population.personal = 0;
    assert!(generate_scenario(&spec).is_err());
    let mut spec = small(1);
    spec.emission.bot.noise_rate = 1.5;
    assert!(matches!(spec.validate(), Err(SynthError::Spec(m)) if m.contains("bot.noiseRate")));
    let json = r#"{"nWeeks": 10, "bogus": 1}"#;
    assert!(serde_json::from_str::<ScenarioSpec>(json).is_err());
}
