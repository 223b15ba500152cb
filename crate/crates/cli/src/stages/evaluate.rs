use std::fs::File;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use chrono::{Duration, NaiveDate};
use rayon::prelude::*;

use super::{create, Context, Stage, CASES, SIGNALS, SUMMARY};
use sensecast::backtest::{
    compare_cohorts, generate_split_plan, read_cases_csv, run_backtest, write_cases_csv, write_summary_csv, BacktestReport, CaseFailure,
    CaseRow, SplitPlan, TestCaseResult,
};
use sensecast::corpus::{read_signal_csv, WeeklySignal};

/// Long-format `cohort,week_start,value` signals, in file order.
pub fn read_signals_csv<R: Read>(input: R) -> Result<Vec<(String, WeeklySignal)>> {
    let mut out: Vec<(String, NaiveDate, Vec<f64>)> = Vec::new();
    for row in csv::Reader::from_reader(input).deserialize::<(String, NaiveDate, f64)>() {
        let (cohort, week, value) = row?;
        match out.last_mut() {
            Some((name, start, values)) if *name == cohort => {
                let expected = *start + Duration::days(7 * values.len() as i64);
                if week != expected {
                    bail!("signal for cohort {cohort}: expected week {expected}, found {week}");
                }
                values.push(value);
            }
            _ => {
                if out.iter().any(|(n, ..)| *n == cohort) {
                    bail!("signal rows for cohort {cohort} are not contiguous");
                }
                out.push((cohort, week, vec![value]));
            }
        }
    }
    out.into_iter().map(|(n, start, values)| Ok((n, WeeklySignal::new(start, values)?))).collect()
}

fn plan(ctx: &Context) -> Result<SplitPlan> {
    Ok(generate_split_plan(ctx.grid().n_weeks, ctx.config().min_train)?)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

pub(super) fn backtest(ctx: &Context) -> Result<()> {
    let grid = ctx.grid();
    let signals_path = ctx.cached(SIGNALS, Stage::Signal)?;
    let offline_path = ctx.inputs().offline;
    let offline = read_signal_csv(ctx.open_input(&offline_path)?).with_context(|| format!("reading {}", offline_path.display()))?;
    if offline.week_start != grid.week_start || offline.len() != grid.n_weeks {
        bail!(
            "offline series covers {} weeks from {}, the configured grid {} weeks from {}",
            offline.len(),
            offline.week_start,
            grid.n_weeks,
            grid.week_start
        );
    }
    let signals = read_signals_csv(open(&signals_path)?)?;
    let plan = plan(ctx)?;
    let spec = ctx.config().model;
    let reports: Vec<BacktestReport> = signals
        .par_iter()
        .map(|(name, x)| run_backtest(name, &offline, x, &spec, &plan).with_context(|| format!("cohort {name}")))
        .collect::<Result<_>>()?;
    let refs: Vec<&BacktestReport> = reports.iter().collect();
    write_cases_csv(&refs, create(&ctx.output(CASES)?)?)?;
    Ok(())
}

/// Rebuild per-cohort reports from cached case rows, in file order.
pub fn reports_from_cases(plan: &SplitPlan, rows: Vec<CaseRow>) -> Result<Vec<BacktestReport>> {
    let mut grouped: Vec<(String, Vec<TestCaseResult>, Vec<CaseFailure>)> = Vec::new();
    for row in rows {
        if grouped.last().is_none_or(|g| g.0 != row.cohort) {
            grouped.push((row.cohort.clone(), Vec::new(), Vec::new()));
        }
        let g = grouped.last_mut().expect("just pushed");
        match (row.predicted, row.ape) {
            (Some(predicted), Some(ape)) => g.1.push(TestCaseResult { case: row.case, actual: row.actual, predicted, ape }),
            _ => g.2.push(CaseFailure { case: row.case, reason: "case failed during backtest".into() }),
        }
    }
    grouped
        .into_iter()
        .map(|(name, results, failures)| BacktestReport::from_cases(&name, plan, results, failures).with_context(|| format!("cohort {name}")))
        .collect()
}

pub(super) fn compare(ctx: &Context) -> Result<()> {
    let rows = read_cases_csv(open(&ctx.cached(CASES, Stage::Backtest)?)?)?;
    let reports = reports_from_cases(&plan(ctx)?, rows)?;
    let mut out = Vec::with_capacity(reports.len());
    if let Some(name) = ctx.config().baseline_name() {
        let Some(baseline) = reports.iter().find(|r| r.cohort == name) else {
            bail!("baseline cohort {name} has no backtest results");
        };
        for r in &reports {
            out.push((r, compare_cohorts(baseline, r)?));
        }
    }
    write_summary_csv(&out.iter().map(|(r, c)| (*r, c)).collect::<Vec<_>>(), create(&ctx.output(SUMMARY)?)?)?;
    Ok(())
}
