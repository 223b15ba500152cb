//! Token-based keyword matching.
//!
//! Matching never looks at substrings: "influenza" does not contain the
//! token "flu". A `**` token in a pattern stands for a gap of one to three
//! arbitrary tokens.

use std::io::BufRead;

use rayon::prelude::*;

use super::{CorpusError, TweetRecord};

pub const WILDCARD: &str = "**";
const WILDCARD_MIN: usize = 1;
const WILDCARD_MAX: usize = 3;

pub const FLU_KEYWORDS: &[&str] = &["flu"];
/// Default unemployment list.
pub const UNEMPLOYMENT_KEYWORDS: &[&str] = &[
    "axed",
    "canned",
    "downsized",
    "pink slip",
    "get a job",
    "got fired",
    "lost ** job",
    "laid off",
    "unemployment",
];
/// The shorter four-pattern unemployment list.
pub const UNEMPLOYMENT_KEYWORDS_SHORT: &[&str] = &["got fired", "lost ** job", "get a job", "unemployment"];
/// General terms used to estimate where platform users live.
pub const BASELINE_TERMS: &[&str] = &["love", "like", "music", "weather", "thing"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordPattern {
    pub pattern_id: String,
    pub tokens: Vec<String>,
}

impl KeywordPattern {
    /// Parse a whitespace-separated pattern line. The id is the normalized
    /// token sequence joined by single spaces.
    pub fn parse(line: &str) -> Result<Self, CorpusError> {
        let tokens: Vec<String> = line.split_whitespace().map(str::to_lowercase).collect();
        let invalid = |reason| CorpusError::InvalidPattern { pattern: line.to_string(), reason };
        if tokens.iter().all(|t| t == WILDCARD) {
            return Err(invalid("needs at least one non-wildcard token"));
        }
        if tokens.first().map(String::as_str) == Some(WILDCARD) || tokens.last().map(String::as_str) == Some(WILDCARD) {
            return Err(invalid("wildcard cannot be first or last"));
        }
        for t in tokens.iter().filter(|t| *t != WILDCARD) {
            if tokenize(t).len() != 1 || tokenize(t)[0] != *t {
                return Err(invalid("tokens must be single lowercase words"));
            }
        }
        Ok(Self { pattern_id: tokens.join(" "), tokens })
    }

    pub fn from_list(lines: &[&str]) -> Result<Vec<Self>, CorpusError> {
        lines.iter().map(|l| Self::parse(l)).collect()
    }

    fn matches_at(&self, text: &[String], pos: usize, pat: usize) -> bool {
        if pat == self.tokens.len() {
            return true;
        }
        if self.tokens[pat] == WILDCARD {
            (WILDCARD_MIN..=WILDCARD_MAX).any(|gap| pos + gap <= text.len() && self.matches_at(text, pos + gap, pat + 1))
        } else {
            pos < text.len() && text[pos] == self.tokens[pat] && self.matches_at(text, pos + 1, pat + 1)
        }
    }

    /// Whether the pattern occurs in an already tokenized text.
    pub fn matches_tokens(&self, text: &[String]) -> bool {
        (0..text.len()).any(|start| self.matches_at(text, start, 0))
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Lowercased word tokens. Splits on non-alphanumeric characters but keeps
/// apostrophes that sit between two alphanumerics ("i'm", "don't").
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            cur.extend(c.to_lowercase());
        } else if is_apostrophe(c) && !cur.is_empty() && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric()) {
            cur.push('\'');
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Ids of the patterns found in `text`, in pattern order.
pub fn match_keywords(text: &str, patterns: &[KeywordPattern]) -> Vec<String> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Vec::new();
    }
    patterns
        .iter()
        .filter(|p| p.matches_tokens(&tokens))
        .map(|p| p.pattern_id.clone())
        .collect()
}

/// Fill `topic_keywords_hit` on every record.
pub fn tag_records(records: &mut [TweetRecord], patterns: &[KeywordPattern]) {
    records
        .par_iter_mut()
        .for_each(|r| r.topic_keywords_hit = match_keywords(&r.text, patterns));
}

/// One pattern per non-empty line; lines starting with `#` are comments.
pub fn load_keyword_list<R: BufRead>(reader: R) -> Result<Vec<KeywordPattern>, CorpusError> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(KeywordPattern::parse(trimmed)?);
    }
    Ok(out)
}
