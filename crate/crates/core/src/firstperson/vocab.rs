use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FirstPersonError;

pub const MAX_NGRAM: usize = 4;
pub const MIN_DF: u64 = 2;

/// Lowercased alphanumeric runs.
pub fn ngram_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
}

/// Pruned n-gram vocabulary. Index order is lexicographic over token tuples.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    ngrams: Vec<Vec<String>>,
    index: HashMap<Vec<String>, usize>,
    pub stopwords: BTreeSet<String>,
    pub min_df: u64,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.ngrams == other.ngrams && self.stopwords == other.stopwords && self.min_df == other.min_df
    }
}

impl Vocabulary {
    fn from_sorted(ngrams: Vec<Vec<String>>, stopwords: BTreeSet<String>, min_df: u64) -> Self {
        let index = ngrams.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        Vocabulary { ngrams, index, stopwords, min_df }
    }

    pub fn len(&self) -> usize {
        self.ngrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ngrams.is_empty()
    }

    pub fn index_of(&self, ngram: &[&str]) -> Option<usize> {
        let key: Vec<String> = ngram.iter().map(|s| s.to_string()).collect();
        self.index.get(&key).copied()
    }

    pub fn ngram(&self, i: usize) -> &[String] {
        &self.ngrams[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[String]> {
        self.ngrams.iter().map(Vec::as_slice)
    }

    /// Sorted, distinct vocabulary indices present in `text`.
    pub fn present(&self, text: &str) -> Vec<u32> {
        let tokens = ngram_tokens(text);
        let mut out = BTreeSet::new();
        for n in 1..=MAX_NGRAM {
            for w in tokens.windows(n) {
                if let Some(&i) = self.index.get(w) {
                    out.insert(i as u32);
                }
            }
        }
        out.into_iter().collect()
    }
}

#[derive(Serialize, Deserialize)]
struct VocabularyFile {
    ngrams: Vec<String>,
    stopwords: BTreeSet<String>,
    min_df: u64,
}

impl Serialize for Vocabulary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VocabularyFile {
            ngrams: self.ngrams.iter().map(|g| g.join(" ")).collect(),
            stopwords: self.stopwords.clone(),
            min_df: self.min_df,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vocabulary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = VocabularyFile::deserialize(d)?;
        let ngrams: Vec<Vec<String>> = f.ngrams.iter().map(|g| g.split(' ').map(str::to_string).collect()).collect();
        if !ngrams.windows(2).all(|w| w[0] < w[1]) {
            return Err(serde::de::Error::custom("vocabulary n-grams must be strictly sorted"));
        }
        Ok(Vocabulary::from_sorted(ngrams, f.stopwords, f.min_df))
    }
}

/// Counts every 1-4-gram occurrence over the distinct training texts, then
/// drops rare and all-stopword n-grams.
///
/// Texts are deduplicated first so repeated copies of one tweet cannot push
/// its n-grams over the frequency threshold.
pub fn build_vocabulary<'a>(
    texts: impl IntoIterator<Item = &'a str>,
    stopwords: &BTreeSet<String>,
) -> Result<Vocabulary, FirstPersonError> {
    let distinct: BTreeSet<&str> = texts.into_iter().collect();
    if distinct.is_empty() {
        return Err(FirstPersonError::EmptyTraining);
    }
    let mut freq: BTreeMap<Vec<String>, u64> = BTreeMap::new();
    for text in distinct {
        let tokens = ngram_tokens(text);
        for n in 1..=MAX_NGRAM {
            for w in tokens.windows(n) {
                if w.iter().all(|t| stopwords.contains(t)) {
                    continue;
                }
                *freq.entry(w.to_vec()).or_insert(0) += 1;
            }
        }
    }
    let ngrams: Vec<Vec<String>> = freq.into_iter().filter(|(_, f)| *f >= MIN_DF).map(|(g, _)| g).collect();
    if ngrams.is_empty() {
        return Err(FirstPersonError::EmptyVocabulary);
    }
    Ok(Vocabulary::from_sorted(ngrams, stopwords.clone(), MIN_DF))
}
