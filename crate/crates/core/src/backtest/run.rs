use rayon::prelude::*;

use super::{ape, check_plan, quantile, BacktestError, SplitCase, SplitPlan};
use crate::corpus::WeeklySignal;
use crate::nowcast::{build_design_matrix, fit_ols, predict_week, ModelSpec};

/// Largest tolerated share of failed cases.
pub const MAX_FAILURE_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, PartialEq)]
pub struct TestCaseResult {
    pub case: SplitCase,
    pub actual: f64,
    pub predicted: f64,
    pub ape: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseFailure {
    pub case: SplitCase,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestReport {
    pub cohort: String,
    pub series_len: usize,
    pub min_train: usize,
    /// Ordered by case id.
    pub results: Vec<TestCaseResult>,
    pub failures: Vec<CaseFailure>,
    pub mape: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

impl BacktestReport {
    /// Aggregates per-case outcomes, enforcing the failure budget.
    pub fn from_cases(
        cohort: &str,
        plan: &SplitPlan,
        mut results: Vec<TestCaseResult>,
        mut failures: Vec<CaseFailure>,
    ) -> Result<Self, BacktestError> {
        results.sort_by_key(|r| r.case.case_id);
        failures.sort_by_key(|f| f.case.case_id);
        let total = results.len() + failures.len();
        if failures.len() as f64 > MAX_FAILURE_FRACTION * total as f64 {
            return Err(BacktestError::BacktestInvalid { failed: failures.len(), total, first: failures[0].reason.clone() });
        }
        if results.is_empty() {
            return Err(BacktestError::Empty);
        }
        let mut apes: Vec<f64> = results.iter().map(|r| r.ape).collect();
        let mape = apes.iter().sum::<f64>() / apes.len() as f64;
        apes.sort_by(f64::total_cmp);
        Ok(BacktestReport {
            cohort: cohort.to_string(),
            series_len: plan.series_len,
            min_train: plan.min_train,
            mape,
            q1: quantile(&apes, 0.25),
            median: quantile(&apes, 0.5),
            q3: quantile(&apes, 0.75),
            results,
            failures,
        })
    }

    pub fn apes(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.ape).collect()
    }

    /// The arithmetic mean of APEs; identical to `mape`.
    pub fn mean(&self) -> f64 {
        self.mape
    }
}

/// Fits each training window once and predicts all of its test weeks.
pub fn run_backtest(
    cohort: &str,
    y: &WeeklySignal,
    x: &WeeklySignal,
    spec: &ModelSpec,
    plan: &SplitPlan,
) -> Result<BacktestReport, BacktestError> {
    if !y.aligned_with(x) {
        return Err(crate::nowcast::NowcastError::Misaligned.into());
    }
    if y.len() != plan.series_len {
        return Err(BacktestError::Plan(format!("plan is for {} weeks, series has {}", plan.series_len, y.len())));
    }
    check_plan(plan, spec)?;
    if let Some((week, &actual)) = y.values.iter().enumerate().skip(plan.min_train).find(|(_, v)| !(**v > 0.0)) {
        return Err(BacktestError::Domain { week, actual });
    }

    let burn_in = spec.burn_in();
    let windows = plan.windows();
    let outcomes: Vec<Vec<Result<TestCaseResult, CaseFailure>>> = windows
        .par_iter()
        .map(|&(kind, s, e)| {
            let cases: Vec<&SplitCase> =
                plan.cases.iter().filter(|c| c.kind == kind && c.train_start == s && c.train_end == e).collect();
            let targets: Vec<usize> = (s.max(burn_in)..=e).collect();
            let model = build_design_matrix(y, x, spec, &targets).and_then(|dm| fit_ols(&dm));
            cases
                .into_iter()
                .map(|case| {
                    let fail = |reason: String| CaseFailure { case: *case, reason };
                    let model = model.as_ref().map_err(|err| fail(err.to_string()))?;
                    let predicted = predict_week(model, y, x, case.test_week).map_err(|err| fail(err.to_string()))?;
                    if !predicted.is_finite() {
                        return Err(fail("non-finite prediction".into()));
                    }
                    let actual = y.values[case.test_week];
                    let ape = ape(actual, predicted).map_err(|err| fail(err.to_string()))?;
                    Ok(TestCaseResult { case: *case, actual, predicted, ape })
                })
                .collect()
        })
        .collect();

    let (mut results, mut failures) = (Vec::new(), Vec::new());
    for o in outcomes.into_iter().flatten() {
        match o {
            Ok(r) => results.push(r),
            Err(f) => failures.push(f),
        }
    }
    BacktestReport::from_cases(cohort, plan, results, failures)
}
