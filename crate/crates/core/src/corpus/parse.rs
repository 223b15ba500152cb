//! Line-delimited JSON corpus reader and writer.

use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::Serialize;
use serde_json::Value;

use super::{CorpusError, GeoPoint, TweetRecord, UserProfile};

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT).ok().map(|n| n.and_utc())
}

pub fn format_timestamp(t: DateTime<Utc>) -> String {
    t.format(TIMESTAMP_FORMAT).to_string()
}

/// Dotted JSON paths for every field the reader needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSchema {
    pub id: String,
    pub text: String,
    pub created_at: String,
    pub coordinates: String,
    pub user_id: String,
    pub user_name: String,
    pub user_screen_name: String,
    pub user_description: String,
    pub user_location: String,
    pub user_profile_image_url: String,
    pub user_followers_count: String,
    pub user_friends_count: String,
    pub user_statuses_count: String,
    pub user_favourites_count: String,
    pub user_listed_count: String,
    pub user_created_at: String,
    pub user_lang: String,
}

impl Default for CorpusSchema {
    fn default() -> Self {
        Self {
            id: "id".into(),
            text: "text".into(),
            created_at: "created_at".into(),
            coordinates: "coordinates".into(),
            user_id: "user.id".into(),
            user_name: "user.name".into(),
            user_screen_name: "user.screen_name".into(),
            user_description: "user.description".into(),
            user_location: "user.location".into(),
            user_profile_image_url: "user.profile_image_url".into(),
            user_followers_count: "user.followers_count".into(),
            user_friends_count: "user.friends_count".into(),
            user_statuses_count: "user.statuses_count".into(),
            user_favourites_count: "user.favourites_count".into(),
            user_listed_count: "user.listed_count".into(),
            user_created_at: "user.created_at".into(),
            user_lang: "user.lang".into(),
        }
    }
}

/// Output of [`parse_corpus`].
#[derive(Debug, Clone, Default)]
pub struct ParsedCorpus {
    pub records: Vec<TweetRecord>,
    pub profiles: BTreeMap<String, UserProfile>,
    /// Malformed or duplicate-id lines.
    pub skipped: usize,
    pub retweets_dropped: usize,
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, key| cur.get(key))
}

fn id_field(v: &Value, path: &str) -> Option<String> {
    match lookup(v, path)? {
        Value::String(s) if !s.is_empty() => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Missing or null string fields read as empty.
fn str_field(v: &Value, path: &str) -> Option<String> {
    match lookup(v, path) {
        None | Some(Value::Null) => Some(String::new()),
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => None,
    }
}

fn count_field(v: &Value, path: &str) -> Option<u64> {
    lookup(v, path)?.as_u64()
}

fn time_field(v: &Value, path: &str) -> Option<DateTime<Utc>> {
    parse_timestamp(lookup(v, path)?.as_str()?)
}

/// `[lon, lat]`, or a GeoJSON-style object wrapping one.
/// `Some(None)` means absent; `None` means malformed.
fn geo_field(v: &Value, path: &str) -> Option<Option<GeoPoint>> {
    let raw = match lookup(v, path) {
        None | Some(Value::Null) => return Some(None),
        Some(Value::Object(o)) => o.get("coordinates")?,
        Some(other) => other,
    };
    let arr = raw.as_array()?;
    if arr.len() != 2 {
        return None;
    }
    let (lon, lat) = (arr[0].as_f64()?, arr[1].as_f64()?);
    GeoPoint::new(lat, lon).map(Some)
}

fn parse_line(v: &Value, schema: &CorpusSchema) -> Option<(TweetRecord, UserProfile)> {
    let profile = UserProfile {
        user_id: id_field(v, &schema.user_id)?,
        name: str_field(v, &schema.user_name)?,
        screen_name: str_field(v, &schema.user_screen_name)?,
        bio: str_field(v, &schema.user_description)?,
        location_raw: str_field(v, &schema.user_location)?,
        profile_image_ref: Some(str_field(v, &schema.user_profile_image_url)?).filter(|s| !s.is_empty()),
        followers: count_field(v, &schema.user_followers_count)?,
        friends: count_field(v, &schema.user_friends_count)?,
        statuses: count_field(v, &schema.user_statuses_count)?,
        favourites: count_field(v, &schema.user_favourites_count)?,
        listed: count_field(v, &schema.user_listed_count)?,
        account_created_at: time_field(v, &schema.user_created_at)?,
        lang: str_field(v, &schema.user_lang)?,
    };
    let text = match lookup(v, &schema.text)? {
        Value::String(s) => s.clone(),
        _ => return None,
    };
    let record = TweetRecord {
        tweet_id: id_field(v, &schema.id)?,
        author_id: profile.user_id.clone(),
        text,
        created_at: time_field(v, &schema.created_at)?,
        lang: profile.lang.clone(),
        geo: geo_field(v, &schema.coordinates)?,
        topic_keywords_hit: Vec::new(),
    };
    Some((record, profile))
}

fn is_retweet(text: &str) -> bool {
    text.trim_start().starts_with("RT @")
}

/// Read a JSONL corpus.
///
/// Malformed lines and repeated tweet ids are skipped and counted. Retweets
/// are dropped. Each author keeps the profile snapshot attached to their
/// latest tweet (first seen wins on equal timestamps).
pub fn parse_corpus<R: BufRead>(mut reader: R, schema: &CorpusSchema) -> Result<ParsedCorpus, CorpusError> {
    let mut out = ParsedCorpus::default();
    let mut seen_ids = HashSet::new();
    let mut profile_time: BTreeMap<String, DateTime<Utc>> = BTreeMap::new();
    let mut parsed_lines = 0usize;
    let mut buf = Vec::new();
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        let Ok(line) = std::str::from_utf8(&buf) else {
            out.skipped += 1;
            continue;
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Value>(line).ok().and_then(|v| parse_line(&v, schema));
        let Some((record, profile)) = parsed else {
            out.skipped += 1;
            continue;
        };
        if !seen_ids.insert(record.tweet_id.clone()) {
            out.skipped += 1;
            continue;
        }
        parsed_lines += 1;
        if is_retweet(&record.text) {
            out.retweets_dropped += 1;
            continue;
        }
        let newer = profile_time.get(&profile.user_id).is_none_or(|t| record.created_at > *t);
        if newer {
            profile_time.insert(profile.user_id.clone(), record.created_at);
            out.profiles.insert(profile.user_id.clone(), profile);
        }
        out.records.push(record);
    }
    if parsed_lines == 0 {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(out)
}

#[derive(Serialize)]
struct WireUser<'a> {
    id: &'a str,
    name: &'a str,
    screen_name: &'a str,
    description: &'a str,
    location: &'a str,
    profile_image_url: Option<&'a str>,
    followers_count: u64,
    friends_count: u64,
    statuses_count: u64,
    favourites_count: u64,
    listed_count: u64,
    created_at: String,
    lang: &'a str,
}

#[derive(Serialize)]
struct WireTweet<'a> {
    id: &'a str,
    text: &'a str,
    created_at: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    coordinates: Option<[f64; 2]>,
    user: WireUser<'a>,
}

/// Serialize one record in the default wire schema (no trailing newline).
pub fn write_corpus_line(record: &TweetRecord, profile: &UserProfile) -> String {
    let wire = WireTweet {
        id: &record.tweet_id,
        text: &record.text,
        created_at: format_timestamp(record.created_at),
        coordinates: record.geo.map(|g| [g.lon, g.lat]),
        user: WireUser {
            id: &profile.user_id,
            name: &profile.name,
            screen_name: &profile.screen_name,
            description: &profile.bio,
            location: &profile.location_raw,
            profile_image_url: profile.profile_image_ref.as_deref(),
            followers_count: profile.followers,
            friends_count: profile.friends,
            statuses_count: profile.statuses,
            favourites_count: profile.favourites,
            listed_count: profile.listed,
            created_at: format_timestamp(profile.account_created_at),
            lang: &profile.lang,
        },
    };
    serde_json::to_string(&wire).expect("wire structs always serialize")
}
