//! User cohorts and the weekly signals they produce.
//!
//! A cohort is a conjunction of user predicates (demographics, profile
//! statistics, first-person status). Each cohort's signal sums a per-user
//! weight over the distinct users active in each week.

mod filter;
mod subsample;
mod weights;

pub use filter::{apply_cohort_filter, CohortSpec, Predicate, UserAnnotation};
pub use subsample::subsample_corpus;
pub use weights::{geo_weighted_signal, w_less, w_more, weighted_weekly_signal, ActivityFeature, WeightScheme};

use crate::corpus::CorpusError;
use crate::demographics::StateCode;

#[derive(Debug, thiserror::Error)]
pub enum CohortError {
    #[error("cohort {cohort:?}: {reason}")]
    Spec { cohort: String, reason: String },
    #[error("user {0} has no profile")]
    MissingProfile(String),
    #[error("user {0} has no resolved state")]
    StateMissing(String),
    #[error("state {0} has no penetration rate")]
    MissingPenetration(StateCode),
    #[error("subsample fraction must be in (0, 100], got {0}")]
    InvalidFraction(f64),
    #[error("geographic weighting goes through geo_weighted_signal")]
    GeoScheme,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}
