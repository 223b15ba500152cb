use super::{BacktestError, BacktestReport};
use crate::stats::{mann_whitney_u, MannWhitney};

/// Significance level for cohort comparisons.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct CohortComparison {
    pub baseline: String,
    pub candidate: String,
    /// Baseline MAPE minus candidate MAPE; positive favours the candidate.
    pub delta_mape: f64,
    /// U counts pairs where the candidate APE is below the baseline APE.
    pub test: MannWhitney,
}

pub fn compare_cohorts(baseline: &BacktestReport, candidate: &BacktestReport) -> Result<CohortComparison, BacktestError> {
    if baseline.series_len != candidate.series_len || baseline.min_train != candidate.min_train {
        return Err(BacktestError::PlanMismatch);
    }
    let test = mann_whitney_u(&candidate.apes(), &baseline.apes(), ALPHA).map_err(|_| BacktestError::Empty)?;
    Ok(CohortComparison {
        baseline: baseline.cohort.clone(),
        candidate: candidate.cohort.clone(),
        delta_mape: baseline.mape - candidate.mape,
        test,
    })
}
