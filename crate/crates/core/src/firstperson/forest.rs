use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow_tree, Dataset, TreeParams};
use super::{featurize, DecisionTree, FeatureVector, FirstPersonError, Label, LabeledTweet, Vocabulary};
use crate::corpus::{TweetRecord, UserProfile};
use crate::seed::rng_for;

pub const MODEL_FORMAT: &str = "sensecast-forest";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestHyperparams {
    pub n_trees: usize,
    /// Candidate features per split; `None` means `ceil(sqrt(d))`.
    pub max_features: Option<usize>,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

impl Default for ForestHyperparams {
    fn default() -> Self {
        ForestHyperparams { n_trees: 100, max_features: None, min_leaf: 1, max_depth: None }
    }
}

/// Out-of-bag estimates. Class index 0 is `other`, 1 is `firstPerson`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OobSummary {
    pub class_error: [f64; 2],
    /// Items of each class that were out of bag for at least one tree.
    pub class_evaluated: [usize; 2],
    /// Class shares in the full training set.
    pub priors: [f64; 2],
    pub adjusted_error: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

/// `sum_c prior_c * err_c`.
pub fn prior_adjusted_error(class_error: [f64; 2], priors: [f64; 2]) -> f64 {
    priors[0] * class_error[0] + priors[1] * class_error[1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub hyperparams: ForestHyperparams,
    pub seed: u64,
    pub n_features: usize,
    pub trees: Vec<DecisionTree>,
    pub oob: OobSummary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Share of trees voting first person.
    pub vote_fraction: f64,
}

impl ForestModel {
    fn vote(&self, value: impl Fn(usize) -> f64 + Copy) -> Prediction {
        let fp = self.trees.iter().filter(|t| t.predict(value) == 1).count();
        // Ties go to `other`.
        let label = if 2 * fp > self.trees.len() { Label::FirstPerson } else { Label::Other };
        Prediction { label, vote_fraction: fp as f64 / self.trees.len() as f64 }
    }
}

pub fn classify(model: &ForestModel, fv: &FeatureVector) -> Result<Prediction, FirstPersonError> {
    if fv.dim() != model.n_features {
        return Err(FirstPersonError::Shape { expected: model.n_features, got: fv.dim() });
    }
    Ok(model.vote(|j| fv.value(j)))
}

/// Classifies every record whose author has a profile; the account-age
/// feature is taken at each tweet's own timestamp.
pub fn classify_records(
    model: &ForestModel,
    vocab: &Vocabulary,
    records: &[TweetRecord],
    profiles: &BTreeMap<String, UserProfile>,
) -> Result<Vec<Option<Prediction>>, FirstPersonError> {
    records
        .par_iter()
        .map(|r| match profiles.get(&r.author_id) {
            Some(p) => classify(model, &featurize(r, p, vocab, r.created_at)).map(Some),
            None => Ok(None),
        })
        .collect()
}

fn class_indices(labels: &[u8]) -> [Vec<u32>; 2] {
    let mut by_class = [Vec::new(), Vec::new()];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l as usize].push(i as u32);
    }
    by_class
}

/// Trains on precomputed feature vectors.
pub fn train_forest(
    rows: &[FeatureVector],
    labels: &[Label],
    hyperparams: &ForestHyperparams,
    seed: u64,
) -> Result<ForestModel, FirstPersonError> {
    if rows.is_empty() {
        return Err(FirstPersonError::EmptyTraining);
    }
    assert_eq!(rows.len(), labels.len(), "one label per row");
    let d = rows[0].dim();
    if let Some(bad) = rows.iter().find(|r| r.dim() != d) {
        return Err(FirstPersonError::Shape { expected: d, got: bad.dim() });
    }
    let n = rows.len();
    let mut columns = vec![vec![0.0; n]; d];
    for (i, r) in rows.iter().enumerate() {
        for &j in &r.text {
            columns[j as usize][i] = 1.0;
        }
        for (k, &v) in r.profile.iter().enumerate() {
            columns[r.vocab_len + k][i] = v;
        }
    }
    let data = Dataset::new(columns, labels.iter().map(|l| l.as_class()).collect());
    fit(&data, hyperparams, seed)
}

pub(crate) fn fit(data: &Dataset, hp: &ForestHyperparams, seed: u64) -> Result<ForestModel, FirstPersonError> {
    let n = data.labels.len();
    let by_class = class_indices(&data.labels);
    if by_class[0].is_empty() || by_class[1].is_empty() {
        return Err(FirstPersonError::DegenerateLabels);
    }
    let d = data.n_features();
    let params = TreeParams {
        max_features: hp.max_features.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize).clamp(1, d),
        min_leaf: hp.min_leaf.max(1),
        max_depth: hp.max_depth,
    };
    let per_class = by_class[0].len().min(by_class[1].len());

    let grown: Vec<(DecisionTree, Vec<bool>)> = (0..hp.n_trees.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, "forest-tree", t as u64);
            let mut in_bag = vec![false; n];
            let mut sample = Vec::with_capacity(2 * per_class);
            for class in &by_class {
                for _ in 0..per_class {
                    let s = class[rng.gen_range(0..class.len())];
                    in_bag[s as usize] = true;
                    sample.push(s);
                }
            }
            (grow_tree(data, sample, &params, &mut rng), in_bag)
        })
        .collect();

    let (trees, bags): (Vec<DecisionTree>, Vec<Vec<bool>>) = grown.into_iter().unzip();
    let oob = oob_summary(data, &trees, &bags, &by_class);
    Ok(ForestModel { hyperparams: ForestHyperparams { n_trees: trees.len(), ..*hp }, seed, n_features: d, trees, oob })
}

fn oob_summary(data: &Dataset, trees: &[DecisionTree], bags: &[Vec<bool>], by_class: &[Vec<u32>; 2]) -> OobSummary {
    let n = data.labels.len();
    let mut wrong = [0usize; 2];
    let mut evaluated = [0usize; 2];
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for i in 0..n {
        let (mut votes, mut total) = (0usize, 0usize);
        for (tree, bag) in trees.iter().zip(bags) {
            if !bag[i] {
                total += 1;
                votes += tree.predict(data.row_value(i)) as usize;
            }
        }
        if total == 0 {
            continue;
        }
        let predicted = u8::from(2 * votes > total);
        let truth = data.labels[i];
        evaluated[truth as usize] += 1;
        wrong[truth as usize] += usize::from(predicted != truth);
        match (truth, predicted) {
            (1, 1) => tp += 1,
            (0, 1) => fp += 1,
            (1, 0) => fn_ += 1,
            _ => tn += 1,
        }
    }
    let class_error = [0, 1].map(|c| if evaluated[c] == 0 { 0.0 } else { wrong[c] as f64 / evaluated[c] as f64 });
    let priors = [0, 1].map(|c| by_class[c].len() as f64 / n as f64);
    OobSummary {
        class_error,
        class_evaluated: evaluated,
        priors,
        adjusted_error: prior_adjusted_error(class_error, priors),
        tp,
        fp,
        fn_,
        tn,
    }
}

/// Featurizes each item at its own tweet time and trains the forest.
pub fn train_first_person_model(
    training: &[LabeledTweet],
    vocab: &Vocabulary,
    hyperparams: &ForestHyperparams,
    seed: u64,
) -> Result<ForestModel, FirstPersonError> {
    let rows: Vec<FeatureVector> = training.iter().map(|t| featurize(&t.record, &t.profile, vocab, t.record.created_at)).collect();
    let labels: Vec<Label> = training.iter().map(|t| t.label).collect();
    train_forest(&rows, &labels, hyperparams, seed)
}

/// On-disk classifier: format tag, version, vocabulary and forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedClassifier {
    pub format: String,
    pub version: u32,
    pub vocabulary: Vocabulary,
    pub forest: ForestModel,
}

pub fn save_model<W: Write>(vocab: &Vocabulary, forest: &ForestModel, out: W) -> Result<(), FirstPersonError> {
    let saved = SavedClassifier { format: MODEL_FORMAT.into(), version: MODEL_VERSION, vocabulary: vocab.clone(), forest: forest.clone() };
    serde_json::to_writer(out, &saved)?;
    Ok(())
}

pub fn load_model<R: Read>(input: R) -> Result<(Vocabulary, ForestModel), FirstPersonError> {
    let v: serde_json::Value = serde_json::from_reader(input)?;
    match (v.get("format").and_then(|f| f.as_str()), v.get("version").and_then(|f| f.as_u64())) {
        (Some(MODEL_FORMAT), Some(ver)) if ver == u64::from(MODEL_VERSION) => {}
        (f, ver) => return Err(FirstPersonError::ModelFormat(format!("format {f:?} version {ver:?}"))),
    }
    let saved: SavedClassifier = serde_json::from_value(v)?;
    if saved.forest.n_features != saved.vocabulary.len() + super::PROFILE_FEATURES.len() {
        return Err(FirstPersonError::ModelFormat("forest width does not match vocabulary".into()));
    }
    Ok((saved.vocabulary, saved.forest))
}
