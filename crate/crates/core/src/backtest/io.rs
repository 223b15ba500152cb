use std::io::{Read, Write};

use super::{BacktestError, BacktestReport, CohortComparison, PlanKind, SplitCase};

/// One line of the cases CSV. Failed cases have no prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    pub cohort: String,
    pub case: SplitCase,
    pub actual: f64,
    pub predicted: Option<f64>,
    pub ape: Option<f64>,
}

const CASE_HEADER: [&str; 9] = ["cohort", "case_id", "plan_kind", "train_start", "train_len", "test_week", "actual", "predicted", "ape"];

pub fn write_cases_csv<W: Write>(reports: &[&BacktestReport], out: W) -> Result<(), BacktestError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CASE_HEADER)?;
    for r in reports {
        let mut rows: Vec<(SplitCase, String, String, String)> = r
            .results
            .iter()
            .map(|c| (c.case, c.actual.to_string(), c.predicted.to_string(), c.ape.to_string()))
            .collect();
        // A failed case's actual is left blank along with its prediction.
        rows.extend(r.failures.iter().map(|f| (f.case, String::new(), String::new(), String::new())));
        rows.sort_by_key(|row| row.0.case_id);
        for (c, actual, predicted, ape) in rows {
            w.write_record([
                r.cohort.as_str(),
                &c.case_id.to_string(),
                &c.kind.to_string(),
                &c.train_start.to_string(),
                &c.train_len().to_string(),
                &c.test_week.to_string(),
                &actual,
                &predicted,
                &ape,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_cases_csv<R: Read>(input: R) -> Result<Vec<CaseRow>, BacktestError> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().collect::<Vec<_>>() != CASE_HEADER {
        return Err(BacktestError::Plan("unexpected cases header".into()));
    }
    let bad = |what: &str, line: u64| BacktestError::Plan(format!("bad {what} on cases line {line}"));
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let num = |i: usize, what: &str| rec[i].parse::<usize>().map_err(|_| bad(what, line));
        let opt = |i: usize, what: &str| -> Result<Option<f64>, BacktestError> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                rec[i].parse::<f64>().map(Some).map_err(|_| bad(what, line))
            }
        };
        let train_start = num(3, "train_start")?;
        let train_len = num(4, "train_len")?;
        if train_len == 0 {
            return Err(bad("train_len", line));
        }
        out.push(CaseRow {
            cohort: rec[0].to_string(),
            case: SplitCase {
                case_id: num(1, "case_id")?,
                kind: rec[2].parse::<PlanKind>()?,
                train_start,
                train_end: train_start + train_len - 1,
                test_week: num(5, "test_week")?,
            },
            actual: opt(6, "actual")?.unwrap_or(f64::NAN),
            predicted: opt(7, "predicted")?,
            ape: opt(8, "ape")?,
        });
    }
    Ok(out)
}

/// `cohort,mape,q1,median,q3,mean,delta_mape,u_stat,significant`.
pub fn write_summary_csv<W: Write>(rows: &[(&BacktestReport, &CohortComparison)], out: W) -> Result<(), BacktestError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["cohort", "mape", "q1", "median", "q3", "mean", "delta_mape", "u_stat", "significant"])?;
    for (r, c) in rows {
        w.write_record([
            r.cohort.as_str(),
            &r.mape.to_string(),
            &r.q1.to_string(),
            &r.median.to_string(),
            &r.q3.to_string(),
            &r.mean().to_string(),
            &c.delta_mape.to_string(),
            &c.test.u.to_string(),
            &c.test.significant.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
