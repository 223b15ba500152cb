//! Corpus ingestion: record types, JSONL parsing, keyword matching, the
//! profile-based spam filter and weekly unique-user aggregation.

mod keywords;
mod parse;
mod signal;
mod spam;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use keywords::{
    load_keyword_list, match_keywords, tag_records, tokenize, KeywordPattern, BASELINE_TERMS,
    FLU_KEYWORDS, UNEMPLOYMENT_KEYWORDS, UNEMPLOYMENT_KEYWORDS_SHORT, WILDCARD,
};
pub use parse::{format_timestamp, parse_corpus, parse_timestamp, write_corpus_line, CorpusSchema, ParsedCorpus};
pub use signal::{read_signal_csv, weekly_unique_user_counts, write_signal_csv, WeekGrid, WeeklySignal};
pub use spam::{passes_spam_filter, MAX_STATUSES, MIN_ACCOUNT_AGE_DAYS, MIN_FOLLOWERS, MIN_STATUSES};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus contains no parseable records")]
    EmptyCorpus,
    #[error("tweet {tweet_id} lies outside the weekly grid")]
    OutOfRange { tweet_id: String },
    #[error("invalid keyword pattern {pattern:?}: {reason}")]
    InvalidPattern { pattern: String, reason: &'static str },
    #[error("invalid weekly signal: {0}")]
    InvalidSignal(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Latitude / longitude in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Option<Self> {
        ((-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon)).then_some(Self { lat, lon })
    }
}

/// One corpus entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    pub text: String,
    pub created_at: DateTime<Utc>,
    /// Language code taken from the author's profile.
    pub lang: String,
    pub geo: Option<GeoPoint>,
    /// Ids of the keyword patterns the text matched; filled by [`tag_records`].
    pub topic_keywords_hit: Vec<String>,
}

/// Author profile snapshot as carried on each tweet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub name: String,
    pub screen_name: String,
    pub bio: String,
    pub location_raw: String,
    pub profile_image_ref: Option<String>,
    pub followers: u64,
    pub friends: u64,
    pub statuses: u64,
    pub favourites: u64,
    pub listed: u64,
    pub account_created_at: DateTime<Utc>,
    pub lang: String,
}

impl UserProfile {
    /// Whole days between account creation and `as_of` (negative if `as_of` precedes it).
    pub fn account_age_days(&self, as_of: DateTime<Utc>) -> i64 {
        (as_of - self.account_created_at).num_days()
    }
}
