//! Split protocol, error metrics and cohort comparison.
//!
//! A test case pairs one training window with one test week. Moving cases
//! slide a fixed-length window forward a week at a time; extending cases
//! grow the window from week 0. With 47 weeks and a 25-week minimum this
//! gives 253 moving and 231 extending cases.

mod compare;
mod io;
mod metrics;
mod plan;
mod run;

pub use compare::{compare_cohorts, CohortComparison, ALPHA};
pub use io::{read_cases_csv, write_cases_csv, write_summary_csv, CaseRow};
pub use metrics::{ape, mape, quantile};
pub use plan::{check_plan, generate_split_plan, PlanKind, SplitCase, SplitPlan};
pub use run::{run_backtest, BacktestReport, CaseFailure, TestCaseResult, MAX_FAILURE_FRACTION};

use crate::nowcast::NowcastError;

#[derive(Debug, thiserror::Error)]
pub enum BacktestError {
    #[error("invalid split plan: {0}")]
    Plan(String),
    #[error("offline value must be positive, got {actual} at week {week}")]
    Domain { week: usize, actual: f64 },
    #[error("no test cases to summarize")]
    Empty,
    #[error("{failed} of {total} cases failed; first failure: {first}")]
    BacktestInvalid { failed: usize, total: usize, first: String },
    #[error("reports were produced by different split plans")]
    PlanMismatch,
    #[error(transparent)]
    Model(#[from] NowcastError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
