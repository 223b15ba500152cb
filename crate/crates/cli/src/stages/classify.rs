use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};

use anyhow::{bail, Context as _, Result};
use serde::{Deserialize, Serialize};

use super::{create, ingest, write_json, Context, Stage, MODEL, PREDICTIONS, TRAINING};
use sensecast::firstperson::{
    build_vocabulary, classify_records, default_stopwords, join_labels, load_model, load_stopwords, read_labels_csv, save_model,
    train_first_person_model, EvalReport, Label,
};
use sensecast::seed::derive_seed;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TrainingSummary {
    labelled: usize,
    /// Labels whose tweet did not survive ingest.
    unmatched: usize,
    first_person: usize,
    other: usize,
    vocabulary: usize,
    n_trees: usize,
    seed: u64,
    oob_adjusted_error: f64,
    oob_class_error: [f64; 2],
    oob: EvalReport,
}

pub(super) fn train(ctx: &Context) -> Result<()> {
    let Some(labels_path) = ctx.inputs().labels else {
        bail!("no label file configured");
    };
    let labels = read_labels_csv(ctx.open_input(&labels_path)?)?;
    let data = ingest::load(ctx)?;
    let (training, unmatched) = join_labels(&labels, &data.records, &data.profiles);
    let stopwords = match &ctx.config().classifier.stopwords_file {
        Some(p) => {
            let p = ctx.loaded.resolve(p);
            load_stopwords(BufReader::new(File::open(&p).with_context(|| format!("opening {}", p.display()))?))?
        }
        None => default_stopwords(),
    };
    let vocab = build_vocabulary(training.iter().map(|t| t.record.text.as_str()), &stopwords)?;
    let hp = ctx.config().classifier.hyperparams();
    let seed = derive_seed(ctx.seed, "forest", 0);
    let forest = train_first_person_model(&training, &vocab, &hp, seed)?;

    let mut w = create(&ctx.output(MODEL)?)?;
    save_model(&vocab, &forest, &mut w)?;
    w.flush()?;
    let fp = training.iter().filter(|t| t.label == Label::FirstPerson).count();
    let o = &forest.oob;
    write_json(
        &ctx.output(TRAINING)?,
        &TrainingSummary {
            labelled: training.len(),
            unmatched,
            first_person: fp,
            other: training.len() - fp,
            vocabulary: vocab.len(),
            n_trees: hp.n_trees,
            seed,
            oob_adjusted_error: o.adjusted_error,
            oob_class_error: o.class_error,
            oob: EvalReport::from_counts(o.tp, o.fp, o.fn_, o.tn)?,
        },
    )
}

/// One row of `predictions.csv`.
#[derive(Debug, Serialize, Deserialize)]
struct PredictionRow {
    tweet_id: String,
    first_person: u8,
    vote_fraction: f64,
}

pub(super) fn apply(ctx: &Context) -> Result<()> {
    let path = ctx.cached(MODEL, Stage::ClassifyTrain)?;
    let (vocab, forest) = load_model(BufReader::new(File::open(&path)?))?;
    let data = ingest::load(ctx)?;
    let predictions = classify_records(&forest, &vocab, &data.records, &data.profiles)?;
    let mut w = csv::Writer::from_writer(create(&ctx.output(PREDICTIONS)?)?);
    for (r, p) in data.records.iter().zip(predictions) {
        let Some(p) = p else { bail!("no profile for tweet {}", r.tweet_id) };
        w.serialize(PredictionRow {
            tweet_id: r.tweet_id.clone(),
            first_person: u8::from(p.label == Label::FirstPerson),
            vote_fraction: p.vote_fraction,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Tweet id to first-person flag.
pub(crate) fn load_predictions(ctx: &Context) -> Result<BTreeMap<String, bool>> {
    let f = File::open(ctx.cached(PREDICTIONS, Stage::Classify)?)?;
    let mut out = BTreeMap::new();
    for row in csv::Reader::from_reader(f).deserialize::<PredictionRow>() {
        let row = row?;
        out.insert(row.tweet_id, row.first_person == 1);
    }
    Ok(out)
}
