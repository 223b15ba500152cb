//! Correlation, rank tests and multiple regression with inference.

mod correlation;
mod mann_whitney;
mod regression;
mod terms;

pub use correlation::{average_ranks, kendall_counts, kendall_tau, pearson_r, spearman_rho, KendallCounts};
pub use mann_whitney::{mann_whitney_u, u_statistic, MannWhitney, MIN_RELIABLE_SAMPLE};
pub use regression::{fit_multiple_regression, significance_stars, write_regression_csv, RegressionSummary, RegressionTerm};
pub use terms::{bio_term_counts, term_rank_similarity};

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("design matrix is rank deficient at column {column}")]
    SingularDesign { column: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn check_pair(x: &[f64], y: &[f64], min_len: usize) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < min_len {
        return Err(StatsError::DegenerateInput(format!("need at least {min_len} observations, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::DegenerateInput("non-finite value".into()));
    }
    Ok(())
}
