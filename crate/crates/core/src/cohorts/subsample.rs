use rand::Rng;

use super::CohortError;
use crate::corpus::TweetRecord;
use crate::seed::rng_for;

/// Uniform sample without replacement of `floor(k * N / 100)` records,
/// returned in tweet-id order. The draw depends only on
/// `(master_seed, k, repeat)`.
pub fn subsample_corpus(records: &[TweetRecord], k_percent: f64, repeat: u64, master_seed: u64) -> Result<Vec<TweetRecord>, CohortError> {
    if !(k_percent > 0.0 && k_percent <= 100.0) {
        return Err(CohortError::InvalidFraction(k_percent));
    }
    let mut sorted: Vec<&TweetRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.tweet_id.cmp(&b.tweet_id));
    let n = sorted.len();
    let take = ((k_percent * n as f64) / 100.0).floor() as usize;
    let mut rng = rng_for(master_seed, &format!("subsample/{}", k_percent.to_bits()), repeat);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..take.min(n) {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut chosen = idx[..take.min(n)].to_vec();
    chosen.sort_unstable();
    Ok(chosen.into_iter().map(|i| sorted[i].clone()).collect())
}
