use serde::{Deserialize, Serialize};

use super::NowcastError;

/// Which social-series lags enter a lagged-linear model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagForm {
    /// `X_t, X_{t-1}, ..., X_{t-n}`: n+1 terms including the current week.
    #[default]
    Contemporaneous,
    /// `X_{t-1}, ..., X_{t-n}`: n strictly lagged terms.
    LaggedOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    LaggedLinear {
        n: usize,
        #[serde(default)]
        lag_form: LagForm,
    },
    /// Offline lags `Y_{t-k}, ..., Y_{t-k-m+1}` plus social lags `X_t..X_{t-n}`.
    Ardl { k: usize, m: usize, n: usize },
}

impl ModelSpec {
    pub fn lagged_linear(n: usize) -> Self {
        ModelSpec::LaggedLinear { n, lag_form: LagForm::Contemporaneous }
    }

    pub fn ardl(k: usize, m: usize, n: usize) -> Self {
        ModelSpec::Ardl { k, m, n }
    }

    pub fn validate(&self) -> Result<(), NowcastError> {
        match *self {
            ModelSpec::Ardl { k, .. } if k < 1 => Err(NowcastError::InvalidSpec(format!("reporting delay k={k} must be >= 1"))),
            ModelSpec::Ardl { m, .. } if m < 1 => Err(NowcastError::InvalidSpec(format!("offline lag count m={m} must be >= 1"))),
            _ => Ok(()),
        }
    }

    /// Social-series lags used, in column order.
    pub fn x_lags(&self) -> Vec<usize> {
        match *self {
            ModelSpec::LaggedLinear { n, lag_form: LagForm::Contemporaneous } | ModelSpec::Ardl { n, .. } => (0..=n).collect(),
            ModelSpec::LaggedLinear { n, lag_form: LagForm::LaggedOnly } => (1..=n).collect(),
        }
    }

    /// Offline-series lags used, in column order.
    pub fn y_lags(&self) -> Vec<usize> {
        match *self {
            ModelSpec::LaggedLinear { .. } => Vec::new(),
            ModelSpec::Ardl { k, m, .. } => (k..k + m).collect(),
        }
    }

    /// Earliest target week whose regressors all exist.
    pub fn burn_in(&self) -> usize {
        self.x_lags().into_iter().chain(self.y_lags()).max().unwrap_or(0)
    }

    /// Intercept plus one column per lag.
    pub fn n_columns(&self) -> usize {
        1 + self.x_lags().len() + self.y_lags().len()
    }

    pub fn column_names(&self) -> Vec<String> {
        let lag = |s: &str, i: usize| if i == 0 { format!("{s}_t") } else { format!("{s}_t-{i}") };
        std::iter::once("intercept".to_string())
            .chain(self.x_lags().into_iter().map(|i| lag("x", i)))
            .chain(self.y_lags().into_iter().map(|i| lag("y", i)))
            .collect()
    }
}
