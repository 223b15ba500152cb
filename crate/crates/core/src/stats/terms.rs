use std::collections::{BTreeMap, BTreeSet};

use super::{kendall_tau, StatsError};
use crate::corpus::tokenize;

/// Number of bios using each term, counting a term once per bio.
pub fn bio_term_counts<'a>(bios: impl IntoIterator<Item = &'a str>, stopwords: &BTreeSet<String>) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for bio in bios {
        let terms: BTreeSet<String> = tokenize(bio).into_iter().filter(|t| !stopwords.contains(t)).collect();
        for t in terms {
            *counts.entry(t).or_insert(0) += 1;
        }
    }
    counts
}

fn top_terms(counts: &BTreeMap<String, u64>, n: usize) -> Vec<&String> {
    let mut v: Vec<(&String, &u64)> = counts.iter().collect();
    v.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    v.into_iter().take(n).map(|(t, _)| t).collect()
}

/// Kendall tau between the user counts of two term tables, over the union
/// of each side's `top_n` terms. A term absent on one side counts as zero.
pub fn term_rank_similarity(a: &BTreeMap<String, u64>, b: &BTreeMap<String, u64>, top_n: usize) -> Result<f64, StatsError> {
    let terms: BTreeSet<&String> = top_terms(a, top_n).into_iter().chain(top_terms(b, top_n)).collect();
    let count = |m: &BTreeMap<String, u64>, t: &String| m.get(t).copied().unwrap_or(0) as f64;
    let xa: Vec<f64> = terms.iter().map(|t| count(a, t)).collect();
    let xb: Vec<f64> = terms.iter().map(|t| count(b, t)).collect();
    kendall_tau(&xa, &xb)
}
