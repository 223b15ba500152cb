use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use super::{create, open_corpus, write_json, Context, Stage, INGEST_SIGNAL, INGEST_STATS, INGEST_TWEETS};
use sensecast::corpus::{parse_corpus, passes_spam_filter, CorpusSchema, tag_records, weekly_unique_user_counts, write_corpus_line, write_signal_csv, TweetRecord, UserProfile};

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct IngestStats {
    records: usize,
    skipped_lines: usize,
    retweets_dropped: usize,
    outside_weeks: usize,
    without_keyword: usize,
    spam_dropped: usize,
    kept: usize,
    kept_users: usize,
}

/// Keyword tweets from non-spam accounts inside the week grid.
pub(crate) struct Ingested {
    pub records: Vec<TweetRecord>,
    pub profiles: BTreeMap<String, UserProfile>,
}

pub(super) fn run(ctx: &Context) -> Result<()> {
    let grid = ctx.grid();
    let parsed = open_corpus(&ctx.inputs().corpus, ctx)?;
    let patterns = ctx.keywords()?;
    let mut stats = IngestStats {
        records: parsed.records.len(),
        skipped_lines: parsed.skipped,
        retweets_dropped: parsed.retweets_dropped,
        outside_weeks: 0,
        without_keyword: 0,
        spam_dropped: 0,
        kept: 0,
        kept_users: 0,
    };
    let mut records: Vec<TweetRecord> = parsed.records.into_iter().filter(|r| grid.contains(r.created_at)).collect();
    stats.outside_weeks = stats.records - records.len();
    tag_records(&mut records, &patterns);
    let before = records.len();
    records.retain(|r| !r.topic_keywords_hit.is_empty());
    stats.without_keyword = before - records.len();
    let as_of = grid.end();
    let before = records.len();
    records.retain(|r| parsed.profiles.get(&r.author_id).is_some_and(|p| passes_spam_filter(p, as_of)));
    stats.spam_dropped = before - records.len();

    let profiles: BTreeMap<String, UserProfile> =
        records.iter().map(|r| (r.author_id.clone(), parsed.profiles[&r.author_id].clone())).collect();
    stats.kept = records.len();
    stats.kept_users = profiles.len();

    let mut w = create(&ctx.output(INGEST_TWEETS)?)?;
    for r in &records {
        writeln!(w, "{}", write_corpus_line(r, &profiles[&r.author_id]))?;
    }
    w.flush()?;
    let signal = weekly_unique_user_counts(&records, &grid)?;
    write_signal_csv(&signal, create(&ctx.output(INGEST_SIGNAL)?)?)?;
    write_json(&ctx.output(INGEST_STATS)?, &stats)
}

/// Reload the ingest output, re-tagging keyword hits.
pub(crate) fn load(ctx: &Context) -> Result<Ingested> {
    let path = ctx.cached(INGEST_TWEETS, Stage::Ingest)?;
    let (mut records, profiles) = if std::fs::metadata(&path)?.len() == 0 {
        (Vec::new(), BTreeMap::new())
    } else {
        // Cached tweets are always in the default wire schema.
        let f = std::fs::File::open(&path)?;
        let p = parse_corpus(std::io::BufReader::new(f), &CorpusSchema::default())?;
        (p.records, p.profiles)
    };
    tag_records(&mut records, &ctx.keywords()?);
    Ok(Ingested { records, profiles })
}
