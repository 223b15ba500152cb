use chrono::{DateTime, Utc};

use super::Vocabulary;
use crate::corpus::{TweetRecord, UserProfile};

/// Profile columns appended after the text features, in order.
pub const PROFILE_FEATURES: [&str; 6] = ["followers", "friends", "listed", "favourites", "statuses", "days"];

/// Sparse binary text features followed by six profile statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Sorted indices of present n-grams.
    pub text: Vec<u32>,
    pub profile: [f64; 6],
    pub vocab_len: usize,
}

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.vocab_len + PROFILE_FEATURES.len()
    }

    pub fn value(&self, j: usize) -> f64 {
        if j < self.vocab_len {
            if self.text.binary_search(&(j as u32)).is_ok() {
                1.0
            } else {
                0.0
            }
        } else {
            self.profile[j - self.vocab_len]
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.value(j)).collect()
    }
}

/// `as_of` fixes the account-age feature; negative ages clamp to zero.
pub fn featurize(record: &TweetRecord, profile: &UserProfile, vocab: &Vocabulary, as_of: DateTime<Utc>) -> FeatureVector {
    FeatureVector {
        text: vocab.present(&record.text),
        profile: [
            profile.followers as f64,
            profile.friends as f64,
            profile.listed as f64,
            profile.favourites as f64,
            profile.statuses as f64,
            profile.account_age_days(as_of).max(0) as f64,
        ],
        vocab_len: vocab.len(),
    }
}
