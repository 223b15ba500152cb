use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::FirstPersonError;
use crate::corpus::{TweetRecord, UserProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Label {
    Other,
    FirstPerson,
}

impl Label {
    pub fn as_class(self) -> u8 {
        match self {
            Label::Other => 0,
            Label::FirstPerson => 1,
        }
    }

    pub fn from_class(c: u8) -> Self {
        if c == 1 {
            Label::FirstPerson
        } else {
            Label::Other
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTweet {
    pub record: TweetRecord,
    pub profile: UserProfile,
    pub label: Label,
}

/// `tweet_id,label` with label 1 (first person) or 0.
pub fn read_labels_csv<R: Read>(input: R) -> Result<BTreeMap<String, Label>, FirstPersonError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| FirstPersonError::BadLabel { line: 1, reason: format!("missing column {name}") })
    };
    let (id_col, label_col) = (col("tweet_id")?, col("label")?);
    let mut out = BTreeMap::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let label = match rec.get(label_col).map(str::trim) {
            Some("1") => Label::FirstPerson,
            Some("0") => Label::Other,
            other => return Err(FirstPersonError::BadLabel { line, reason: format!("label must be 1 or 0, got {other:?}") }),
        };
        let id = rec.get(id_col).unwrap_or("").trim().to_string();
        if id.is_empty() {
            return Err(FirstPersonError::BadLabel { line, reason: "empty tweet_id".into() });
        }
        if out.insert(id.clone(), label).is_some() {
            return Err(FirstPersonError::BadLabel { line, reason: format!("duplicate tweet_id {id}") });
        }
    }
    Ok(out)
}

/// Joins labels to corpus records by tweet id, in label-file id order.
/// Returns the joined items and the number of labels with no matching
/// record or profile.
pub fn join_labels(
    labels: &BTreeMap<String, Label>,
    records: &[TweetRecord],
    profiles: &BTreeMap<String, UserProfile>,
) -> (Vec<LabeledTweet>, usize) {
    let by_id: BTreeMap<&str, &TweetRecord> = records.iter().map(|r| (r.tweet_id.as_str(), r)).collect();
    let mut out = Vec::new();
    let mut missing = 0;
    for (id, &label) in labels {
        match by_id.get(id.as_str()).and_then(|r| profiles.get(&r.author_id).map(|p| (r, p))) {
            Some((r, p)) => out.push(LabeledTweet { record: (*r).clone(), profile: p.clone(), label }),
            None => missing += 1,
        }
    }
    (out, missing)
}
