//! Per-state platform penetration: users observed on general terms divided
//! by population. Only relative magnitudes matter.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{resolve_user_states, DemographicsError, Gazetteer, StateCode};
use crate::corpus::{match_keywords, KeywordPattern, TweetRecord, UserProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenetrationTable {
    pub rates: BTreeMap<StateCode, f64>,
}

impl PenetrationTable {
    pub fn rate(&self, state: StateCode) -> Option<f64> {
        self.rates.get(&state).copied()
    }
}

/// `rate[s] = users[s] / population[s]`. States present only in the
/// population map are ignored.
pub fn compute_penetration_table(
    baseline_user_states: &BTreeMap<StateCode, u64>,
    population: &BTreeMap<StateCode, f64>,
) -> Result<PenetrationTable, DemographicsError> {
    let mut rates = BTreeMap::new();
    for (state, users) in baseline_user_states {
        let pop = *population.get(state).ok_or(DemographicsError::MissingPopulation(*state))?;
        if !(pop > 0.0 && pop.is_finite()) {
            return Err(DemographicsError::Domain(format!("population of {state} must be positive, got {pop}")));
        }
        if *users == 0 {
            return Err(DemographicsError::Domain(format!("{state} has no baseline users; its rate would be zero")));
        }
        rates.insert(*state, *users as f64 / pop);
    }
    Ok(PenetrationTable { rates })
}

/// Distinct users per state among records that match any baseline term.
pub fn baseline_user_states(
    records: &[TweetRecord],
    profiles: &BTreeMap<String, UserProfile>,
    gazetteer: &Gazetteer,
    terms: &[KeywordPattern],
) -> BTreeMap<StateCode, u64> {
    let matching: Vec<TweetRecord> =
        records.iter().filter(|r| !match_keywords(&r.text, terms).is_empty()).cloned().collect();
    let authors: BTreeSet<&str> = matching.iter().map(|r| r.author_id.as_str()).collect();
    let active: BTreeMap<String, UserProfile> =
        profiles.iter().filter(|(id, _)| authors.contains(id.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect();
    let mut counts = BTreeMap::new();
    for state in resolve_user_states(&matching, &active, gazetteer).into_values().flatten() {
        *counts.entry(state).or_insert(0) += 1;
    }
    counts
}

#[derive(Serialize, Deserialize)]
struct PopulationRow {
    state: StateCode,
    population: f64,
}

/// CSV `state,population`.
pub fn read_population_csv<R: Read>(reader: R) -> Result<BTreeMap<StateCode, f64>, DemographicsError> {
    let mut out = BTreeMap::new();
    for row in csv::Reader::from_reader(reader).deserialize::<PopulationRow>() {
        let row = row?;
        out.insert(row.state, row.population);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct PenetrationRow {
    state: StateCode,
    users: u64,
    population: f64,
    rate: f64,
}

/// CSV `state,users,population,rate`, one row per table entry.
pub fn write_penetration_csv<W: Write>(
    table: &PenetrationTable,
    users: &BTreeMap<StateCode, u64>,
    population: &BTreeMap<StateCode, f64>,
    writer: W,
) -> Result<(), DemographicsError> {
    let mut w = csv::Writer::from_writer(writer);
    for (state, rate) in &table.rates {
        w.serialize(PenetrationRow {
            state: *state,
            users: users.get(state).copied().unwrap_or(0),
            population: population.get(state).copied().unwrap_or(f64::NAN),
            rate: *rate,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_penetration_csv<R: Read>(reader: R) -> Result<PenetrationTable, DemographicsError> {
    let mut rates = BTreeMap::new();
    for row in csv::Reader::from_reader(reader).deserialize::<PenetrationRow>() {
        let row = row?;
        if !(row.rate > 0.0 && row.rate.is_finite()) {
            return Err(DemographicsError::Domain(format!("rate for {} must be positive", row.state)));
        }
        rates.insert(row.state, row.rate);
    }
    Ok(PenetrationTable { rates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &str) -> StateCode {
        StateCode::parse(c).unwrap()
    }

    #[test]
    fn division() {
        let users = BTreeMap::from([(s("AL"), 100), (s("AK"), 50)]);
        let pop = BTreeMap::from([(s("AL"), 1000.0), (s("AK"), 1000.0)]);
        let t = compute_penetration_table(&users, &pop).unwrap();
        assert_eq!(t.rate(s("AL")), Some(0.1));
        assert_eq!(t.rate(s("AK")), Some(0.05));
    }

    #[test]
    fn invalid_inputs() {
        let pop = BTreeMap::from([(s("AL"), 1000.0)]);
        assert!(matches!(
            compute_penetration_table(&BTreeMap::from([(s("AL"), 0)]), &pop),
            Err(DemographicsError::Domain(_))
        ));
        assert!(matches!(
            compute_penetration_table(&BTreeMap::from([(s("AK"), 3)]), &pop),
            Err(DemographicsError::MissingPopulation(_))
        ));
        let zero = BTreeMap::from([(s("AL"), 0.0)]);
        assert!(matches!(
            compute_penetration_table(&BTreeMap::from([(s("AL"), 3)]), &zero),
            Err(DemographicsError::Domain(_))
        ));
    }

    #[test]
    fn csv_roundtrip() {
        let users = BTreeMap::from([(s("TX"), 7)]);
        let pop = BTreeMap::from([(s("TX"), 70.0)]);
        let t = compute_penetration_table(&users, &pop).unwrap();
        let mut buf = Vec::new();
        write_penetration_csv(&t, &users, &pop, &mut buf).unwrap();
        assert_eq!(read_penetration_csv(buf.as_slice()).unwrap(), t);
        assert_eq!(read_population_csv("state,population\nTX,70\n".as_bytes()).unwrap(), pop);
    }

    proptest! {
        #[test]
        fn population_scaling_scales_rates(u1 in 1u64..1000, u2 in 1u64..1000, p1 in 1.0f64..1e7, p2 in 1.0f64..1e7, c in 0.1f64..100.0) {
            let users = BTreeMap::from([(s("AL"), u1), (s("AK"), u2)]);
            let pop = BTreeMap::from([(s("AL"), p1), (s("AK"), p2)]);
            let scaled: BTreeMap<_, _> = pop.iter().map(|(k, v)| (*k, v * c)).collect();
            let a = compute_penetration_table(&users, &pop).unwrap();
            let b = compute_penetration_table(&users, &scaled).unwrap();
            for (k, r) in &a.rates {
                prop_assert!((b.rates[k] * c - r).abs() <= 1e-12 * r.abs());
            }
            prop_assert_eq!(a.rates[&s("AL")] > a.rates[&s("AK")], b.rates[&s("AL")] > b.rates[&s("AK")]);
        }
    }
}
