use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, featurize, FirstPersonError, ForestModel, Label, LabeledTweet, Vocabulary};

/// Confusion counts with first person as the positive class. Metrics are
/// percentages at full precision; `Display` rounds to one decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub accuracy: f64,
    /// None when nothing was predicted positive.
    pub precision: Option<f64>,
    /// None when the test set has no positives.
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Result<Self, FirstPersonError> {
        let n = tp + fp + fn_ + tn;
        if n == 0 {
            return Err(FirstPersonError::EmptyTest);
        }
        let ratio = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
        Ok(EvalReport { tp, fp, fn_, tn, accuracy: 100.0 * (tp + tn) as f64 / n as f64, precision, recall, f1 })
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.1}"));
        write!(
            f,
            "accuracy {:.1} precision {} recall {} f1 {} (tp {} fp {} fn {} tn {})",
            self.accuracy,
            show(self.precision),
            show(self.recall),
            show(self.f1),
            self.tp,
            self.fp,
            self.fn_,
            self.tn
        )
    }
}

/// Builds a report from `(truth, predicted)` pairs.
pub fn evaluate_predictions(pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<EvalReport, FirstPersonError> {
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for pair in pairs {
        match pair {
            (Label::FirstPerson, Label::FirstPerson) => tp += 1,
            (Label::Other, Label::FirstPerson) => fp += 1,
            (Label::FirstPerson, Label::Other) => fn_ += 1,
            (Label::Other, Label::Other) => tn += 1,
        }
    }
    EvalReport::from_counts(tp, fp, fn_, tn)
}

pub fn evaluate_classifier(model: &ForestModel, test: &[LabeledTweet], vocab: &Vocabulary) -> Result<EvalReport, FirstPersonError> {
    if test.is_empty() {
        return Err(FirstPersonError::EmptyTest);
    }
    let pairs = test
        .par_iter()
        .map(|t| {
            let fv = featurize(&t.record, &t.profile, vocab, t.record.created_at);
            classify(model, &fv).map(|p| (t.label, p.label))
        })
        .collect::<Result<Vec<_>, _>>()?;
    evaluate_predictions(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example() {
        let r = EvalReport::from_counts(2, 1, 1, 6).unwrap();
        assert_eq!(r.to_string(), "accuracy 80.0 precision 66.7 recall 66.7 f1 66.7 (tp 2 fp 1 fn 1 tn 6)");
    }

    #[test]
    fn perfect_and_undefined() {
        let r = EvalReport::from_counts(3, 0, 0, 4).unwrap();
        assert_eq!((r.accuracy, r.precision, r.recall, r.f1), (100.0, Some(100.0), Some(100.0), Some(100.0)));
        let r = EvalReport::from_counts(0, 0, 2, 5).unwrap();
        assert_eq!(r.precision, None);
        assert_eq!(r.f1, None);
        assert!(r.to_string().contains("precision n/a"));
        assert!(matches!(EvalReport::from_counts(0, 0, 0, 0), Err(FirstPersonError::EmptyTest)));
    }

    #[test]
    fn metrics_consistent_with_counts() {
        for (tp, fp, fn_, tn) in [(5, 2, 3, 9), (1, 0, 7, 2), (10, 10, 0, 0)] {
            let r = EvalReport::from_counts(tp, fp, fn_, tn).unwrap();
            let (p, rc) = (tp as f64 / (tp + fp) as f64, tp as f64 / (tp + fn_) as f64);
            assert!((r.precision.unwrap() - 100.0 * p).abs() < 1e-9);
            assert!((r.recall.unwrap() - 100.0 * rc).abs() < 1e-9);
            assert!((r.f1.unwrap() - 100.0 * 2.0 * p * rc / (p + rc)).abs() < 1e-9);
        }
    }
}
