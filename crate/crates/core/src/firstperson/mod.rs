//! First-person tweet classifier.
//!
//! Tweets are represented by binary 1-4-gram presence features over a
//! pruned vocabulary plus six raw profile statistics. A random forest with
//! per-tree class-balanced bootstraps separates first-person reports from
//! news and promotional content; its out-of-bag error is re-weighted to the
//! class priors of the full labelled set.

mod eval;
mod features;
mod forest;
mod labels;
mod stopwords;
mod tree;
mod vocab;

pub use eval::{evaluate_classifier, evaluate_predictions, EvalReport};
pub use features::{featurize, FeatureVector, PROFILE_FEATURES};
pub use forest::{
    classify, classify_records, load_model, save_model, train_first_person_model, train_forest, ForestHyperparams,
    ForestModel, OobSummary, Prediction, SavedClassifier, MODEL_FORMAT, MODEL_VERSION,
};
pub use labels::{join_labels, read_labels_csv, Label, LabeledTweet};
pub use stopwords::{default_stopwords, load_stopwords, DEFAULT_STOPWORDS};
pub use tree::{DecisionTree, Node};
pub use vocab::{build_vocabulary, ngram_tokens, Vocabulary, MAX_NGRAM, MIN_DF};

#[derive(Debug, thiserror::Error)]
pub enum FirstPersonError {
    #[error("vocabulary is empty after pruning")]
    EmptyVocabulary,
    #[error("training data is empty")]
    EmptyTraining,
    #[error("training labels contain a single class")]
    DegenerateLabels,
    #[error("feature vector has {got} dimensions, model expects {expected}")]
    Shape { expected: usize, got: usize },
    #[error("test set is empty")]
    EmptyTest,
    #[error("label file line {line}: {reason}")]
    BadLabel { line: u64, reason: String },
    #[error("unsupported model file: {0}")]
    ModelFormat(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
