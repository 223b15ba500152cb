use std::collections::{BTreeMap, BTreeSet};

use anyhow::{Context as _, Result};
use rayon::prelude::*;

use super::{classify, create, demographics, ingest, Context, SIGNALS};
use crate::config::CohortEntry;
use sensecast::cohorts::{apply_cohort_filter, geo_weighted_signal, subsample_corpus, weighted_weekly_signal, UserAnnotation, WeightScheme};
use sensecast::corpus::{TweetRecord, WeeklySignal};

struct Job<'a> {
    entry: &'a CohortEntry,
    name: String,
    repeat: Option<u64>,
}

pub(super) fn run(ctx: &Context) -> Result<()> {
    let config = ctx.config();
    let grid = ctx.grid();
    let data = ingest::load(ctx)?;
    let users = demographics::load_users(ctx)?;
    let needs_fp = config.cohorts.iter().any(|e| e.spec().first_person_only());
    let predictions = if needs_fp { Some(classify::load_predictions(ctx)?) } else { None };
    let penetration = if config.cohorts.iter().any(|e| e.scheme() == WeightScheme::GeoPenetration) {
        Some(demographics::load_penetration(ctx)?)
    } else {
        None
    };

    let is_fp = |r: &TweetRecord| predictions.as_ref().is_some_and(|p| p.get(&r.tweet_id).copied().unwrap_or(false));
    let mut annotations = BTreeMap::new();
    for (id, profile) in &data.profiles {
        let row = users.get(id).with_context(|| format!("user {id} missing from demographics output"))?;
        annotations.insert(
            id.clone(),
            UserAnnotation { profile: profile.clone(), gender: row.gender, age: row.age, state: row.state, first_person: false },
        );
    }
    for r in data.records.iter().filter(|r| is_fp(r)) {
        if let Some(a) = annotations.get_mut(&r.author_id) {
            a.first_person = true;
        }
    }
    let user_states: BTreeMap<String, _> = users.iter().map(|(id, u)| (id.clone(), u.state)).collect();

    let jobs: Vec<Job> = config
        .cohorts
        .iter()
        .flat_map(|entry| {
            let names = entry.series_names();
            let subsampled = entry.subsample.is_some();
            names.into_iter().enumerate().map(move |(i, name)| Job { entry, name, repeat: subsampled.then_some(i as u64) })
        })
        .collect();

    let signals: Vec<(String, WeeklySignal)> = jobs
        .par_iter()
        .map(|job| -> Result<(String, WeeklySignal)> {
            let spec = job.entry.spec();
            let mut records = match (job.repeat, job.entry.subsample) {
                (Some(i), Some(s)) => subsample_corpus(&data.records, s.percent, i, ctx.seed)?,
                _ => data.records.clone(),
            };
            if spec.first_person_only() {
                records.retain(|r| is_fp(r));
            }
            let cohort: BTreeSet<String> = apply_cohort_filter(&annotations, &spec)?;
            let signal = match job.entry.scheme() {
                WeightScheme::GeoPenetration => {
                    let table = penetration.as_ref().expect("loaded for geo cohorts");
                    geo_weighted_signal(&records, &cohort, &user_states, table, &grid)?
                }
                scheme => weighted_weekly_signal(&records, &data.profiles, &cohort, scheme, &grid)?,
            };
            Ok((job.name.clone(), signal))
        })
        .collect::<Result<_>>()?;

    let mut w = csv::Writer::from_writer(create(&ctx.output(SIGNALS)?)?);
    w.write_record(["cohort", "week_start", "value"])?;
    for (name, s) in &signals {
        for (i, v) in s.values.iter().enumerate() {
            w.write_record([name.as_str(), &grid.week_date(i).to_string(), &v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
