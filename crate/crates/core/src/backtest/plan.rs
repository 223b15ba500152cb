use std::fmt;

use serde::{Deserialize, Serialize};

use super::BacktestError;
use crate::nowcast::ModelSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    Moving,
    Extending,
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanKind::Moving => "moving",
            PlanKind::Extending => "extending",
        })
    }
}

impl std::str::FromStr for PlanKind {
    type Err = BacktestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "moving" => Ok(PlanKind::Moving),
            "extending" => Ok(PlanKind::Extending),
            other => Err(BacktestError::Plan(format!("unknown plan kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitCase {
    pub case_id: usize,
    pub kind: PlanKind,
    pub train_start: usize,
    /// Inclusive.
    pub train_end: usize,
    pub test_week: usize,
}

impl SplitCase {
    pub fn train_len(&self) -> usize {
        self.train_end + 1 - self.train_start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    pub series_len: usize,
    pub min_train: usize,
    /// Moving cases first, then extending; ids are positions.
    pub cases: Vec<SplitCase>,
}

impl SplitPlan {
    pub fn n_moving(&self) -> usize {
        self.cases.iter().filter(|c| c.kind == PlanKind::Moving).count()
    }

    pub fn n_extending(&self) -> usize {
        self.cases.iter().filter(|c| c.kind == PlanKind::Extending).count()
    }

    /// Distinct training windows in case order.
    pub fn windows(&self) -> Vec<(PlanKind, usize, usize)> {
        let mut out: Vec<(PlanKind, usize, usize)> = Vec::new();
        for c in &self.cases {
            let w = (c.kind, c.train_start, c.train_end);
            if out.last() != Some(&w) {
                out.push(w);
            }
        }
        out
    }
}

pub fn generate_split_plan(series_len: usize, min_train: usize) -> Result<SplitPlan, BacktestError> {
    if min_train == 0 || series_len <= min_train {
        return Err(BacktestError::Plan(format!("series length {series_len} must exceed minimum training length {min_train}")));
    }
    let mut cases = Vec::new();
    let push = |kind, train_start, train_end, cases: &mut Vec<SplitCase>| {
        for test_week in train_end + 1..series_len {
            cases.push(SplitCase { case_id: cases.len(), kind, train_start, train_end, test_week });
        }
    };
    for s in 0..series_len - min_train {
        push(PlanKind::Moving, s, s + min_train - 1, &mut cases);
    }
    for len in min_train + 1..series_len {
        push(PlanKind::Extending, 0, len - 1, &mut cases);
    }
    Ok(SplitPlan { series_len, min_train, cases })
}

/// Rows a window contributes once targets before the burn-in are dropped.
pub(crate) fn admissible_rows(train_start: usize, train_end: usize, burn_in: usize) -> usize {
    (train_end + 1).saturating_sub(train_start.max(burn_in))
}

/// Rejects plans whose windows leave fewer than `columns + 2` rows.
pub fn check_plan(plan: &SplitPlan, spec: &ModelSpec) -> Result<(), BacktestError> {
    spec.validate()?;
    let need = spec.n_columns() + 2;
    for (kind, s, e) in plan.windows() {
        let rows = admissible_rows(s, e, spec.burn_in());
        if rows < need {
            return Err(BacktestError::Plan(format!(
                "{kind} window [{s}, {e}] has {rows} usable rows after burn-in {}; the model needs at least {need}",
                spec.burn_in()
            )));
        }
    }
    Ok(())
}
