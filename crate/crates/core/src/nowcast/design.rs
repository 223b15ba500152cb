use crate::corpus::WeeklySignal;

use super::{ModelSpec, NowcastError};

/// Row-major regressors, one row per target week.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub spec: ModelSpec,
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub target_indices: Vec<usize>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }
}

/// Regressor row for week `t`. Offline lags always come from the observed
/// offline series; the reporting delay guarantees they are published.
pub fn design_row(y: &WeeklySignal, x: &WeeklySignal, spec: &ModelSpec, t: usize) -> Result<Vec<f64>, NowcastError> {
    spec.validate()?;
    if !y.aligned_with(x) {
        return Err(NowcastError::Misaligned);
    }
    if t >= x.len() {
        return Err(NowcastError::OutOfRange { week: t, len: x.len() });
    }
    let burn_in = spec.burn_in();
    if t < burn_in {
        return Err(NowcastError::BurnIn { week: t, burn_in });
    }
    let mut row = Vec::with_capacity(spec.n_columns());
    row.push(1.0);
    row.extend(spec.x_lags().into_iter().map(|i| x.values[t - i]));
    row.extend(spec.y_lags().into_iter().map(|i| y.values[t - i]));
    Ok(row)
}

pub fn build_design_matrix(
    y: &WeeklySignal,
    x: &WeeklySignal,
    spec: &ModelSpec,
    targets: &[usize],
) -> Result<DesignMatrix, NowcastError> {
    let rows = targets.iter().map(|&t| design_row(y, x, spec, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(DesignMatrix {
        spec: *spec,
        column_names: spec.column_names(),
        rows,
        targets: targets.iter().map(|&t| y.values[t]).collect(),
        target_indices: targets.to_vec(),
    })
}
