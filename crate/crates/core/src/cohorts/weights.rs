use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::CohortError;
use crate::corpus::{CorpusError, TweetRecord, UserProfile, WeekGrid, WeeklySignal};
use crate::demographics::{PenetrationTable, StateCode};

/// Profile statistic used as an activity count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ActivityFeature {
    Statuses,
    Followers,
    Friends,
    AccountAgeDays,
}

impl ActivityFeature {
    /// Account age is measured at `as_of` and clamped at zero.
    pub fn count(self, p: &UserProfile, as_of: DateTime<Utc>) -> f64 {
        match self {
            ActivityFeature::Statuses => p.statuses as f64,
            ActivityFeature::Followers => p.followers as f64,
            ActivityFeature::Friends => p.friends as f64,
            ActivityFeature::AccountAgeDays => p.account_age_days(as_of).max(0) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum WeightScheme {
    Uniform,
    LessActive { feature: ActivityFeature },
    MoreActive { feature: ActivityFeature },
    GeoPenetration,
}

/// `1 / log10(10 + count)`.
pub fn w_less(count: f64) -> f64 {
    1.0 / (10.0 + count).log10()
}

/// `log10(10 + count)`.
pub fn w_more(count: f64) -> f64 {
    (10.0 + count).log10()
}

/// Distinct cohort authors per week, in sorted order.
fn active_users<'a>(records: &'a [TweetRecord], cohort: &BTreeSet<String>, grid: &WeekGrid) -> Result<Vec<BTreeSet<&'a str>>, CohortError> {
    let mut bins: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); grid.n_weeks];
    for r in records {
        if !cohort.contains(&r.author_id) {
            continue;
        }
        let w = grid.bin_of(r.created_at).ok_or_else(|| CorpusError::OutOfRange { tweet_id: r.tweet_id.clone() })?;
        bins[w].insert(&r.author_id);
    }
    Ok(bins)
}

/// Sum of per-user weights over distinct active cohort users per week.
/// Account-age counts are taken at the end of the grid.
pub fn weighted_weekly_signal(
    records: &[TweetRecord],
    profiles: &BTreeMap<String, UserProfile>,
    cohort: &BTreeSet<String>,
    scheme: WeightScheme,
    grid: &WeekGrid,
) -> Result<WeeklySignal, CohortError> {
    let as_of = grid.end();
    let weight = |p: &UserProfile| match scheme {
        WeightScheme::Uniform => Ok(1.0),
        WeightScheme::LessActive { feature } => Ok(w_less(feature.count(p, as_of))),
        WeightScheme::MoreActive { feature } => Ok(w_more(feature.count(p, as_of))),
        WeightScheme::GeoPenetration => Err(CohortError::GeoScheme),
    };
    let bins = active_users(records, cohort, grid)?;
    let mut values = Vec::with_capacity(bins.len());
    for users in bins {
        let mut sum = 0.0;
        for u in users {
            let p = profiles.get(u).ok_or_else(|| CohortError::MissingProfile(u.to_string()))?;
            sum += weight(p)?;
        }
        values.push(sum);
    }
    Ok(WeeklySignal::new(grid.week_start, values)?)
}

/// `sum_s nusers[s, w] * (1 / rate[s])` per week.
pub fn geo_weighted_signal(
    records: &[TweetRecord],
    cohort: &BTreeSet<String>,
    user_states: &BTreeMap<String, Option<StateCode>>,
    penetration: &PenetrationTable,
    grid: &WeekGrid,
) -> Result<WeeklySignal, CohortError> {
    let mut inverse: BTreeMap<StateCode, f64> = BTreeMap::new();
    for u in cohort {
        let s = user_states.get(u).copied().flatten().ok_or_else(|| CohortError::StateMissing(u.clone()))?;
        let rate = penetration.rate(s).ok_or(CohortError::MissingPenetration(s))?;
        inverse.insert(s, 1.0 / rate);
    }
    let bins = active_users(records, cohort, grid)?;
    let values = bins
        .into_iter()
        .map(|users| {
            let mut per_state: BTreeMap<StateCode, u64> = BTreeMap::new();
            for u in users {
                let s = user_states[u].expect("checked above");
                *per_state.entry(s).or_insert(0) += 1;
            }
            per_state.into_iter().map(|(s, n)| n as f64 * inverse[&s]).sum()
        })
        .collect();
    Ok(WeeklySignal::new(grid.week_start, values)?)
}
