use std::collections::BTreeMap;
use std::fs::File;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use super::{create, ingest, open_corpus, Context, Stage, PENETRATION, USERS};
use sensecast::corpus::{KeywordPattern, BASELINE_TERMS};
use sensecast::demographics::{
    baseline_user_states, compute_penetration_table, infer_age_buckets, infer_gender, read_penetration_csv, read_population_csv,
    resolve_user_states, write_penetration_csv, AgeBucket, Gazetteer, GenderLabel, NameDictionary, PenetrationTable, StateCode,
    StubFaceClient,
};

/// One row of `users.csv`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct UserRow {
    pub user_id: String,
    pub gender: GenderLabel,
    pub age: AgeBucket,
    pub state: Option<StateCode>,
}

pub(super) fn run(ctx: &Context) -> Result<()> {
    let inputs = ctx.inputs();
    let data = ingest::load(ctx)?;
    let names = NameDictionary::from_csv(ctx.open_input(&inputs.names)?)?;
    let gazetteer = Gazetteer::from_csv(ctx.open_input(&inputs.cities)?, ctx.open_input(&inputs.boxes)?)?;
    let faces = match ctx.face_stub.as_ref().or(inputs.faces.as_ref()) {
        Some(p) => StubFaceClient::from_csv(ctx.open_input(p)?)?,
        None => StubFaceClient::default(),
    };

    let profiles: Vec<_> = data.profiles.values().collect();
    let ages = infer_age_buckets(&profiles, &faces, ctx.config().face_max_in_flight);
    let states = resolve_user_states(&data.records, &data.profiles, &gazetteer);
    let mut w = csv::Writer::from_writer(create(&ctx.output(USERS)?)?);
    let mut transport_failures = 0usize;
    for (p, age) in profiles.iter().zip(ages) {
        // A failed lookup leaves the age unknown; the count is reported.
        let age = age.unwrap_or_else(|_| {
            transport_failures += 1;
            AgeBucket::Unknown
        });
        w.serialize(UserRow {
            user_id: p.user_id.clone(),
            gender: infer_gender(&p.name, &names),
            age,
            state: states.get(&p.user_id).copied().flatten(),
        })?;
    }
    w.flush()?;
    if transport_failures > 0 {
        eprintln!("warning: face annotation failed for {transport_failures} users; their age is unknown");
    }

    if let (Some(pop), Some(base)) = (&inputs.population, &inputs.baseline_corpus) {
        let population = read_population_csv(ctx.open_input(pop)?)?;
        let corpus = open_corpus(base, ctx)?;
        let terms = KeywordPattern::from_list(BASELINE_TERMS)?;
        let users = baseline_user_states(&corpus.records, &corpus.profiles, &gazetteer, &terms);
        let table = compute_penetration_table(&users, &population)?;
        write_penetration_csv(&table, &users, &population, create(&ctx.output(PENETRATION)?)?)?;
    }
    Ok(())
}

pub(crate) fn load_users(ctx: &Context) -> Result<BTreeMap<String, UserRow>> {
    let f = File::open(ctx.cached(USERS, Stage::Demographics)?)?;
    let mut out = BTreeMap::new();
    for row in csv::Reader::from_reader(f).deserialize::<UserRow>() {
        let row = row?;
        out.insert(row.user_id.clone(), row);
    }
    Ok(out)
}

pub(crate) fn load_penetration(ctx: &Context) -> Result<PenetrationTable> {
    Ok(read_penetration_csv(File::open(ctx.cached(PENETRATION, Stage::Demographics)?)?)?)
}
