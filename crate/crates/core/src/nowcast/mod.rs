//! Lagged-regression now-casting models.
//!
//! Two model families share one design-matrix builder:
//!
//! - lagged linear: `Y_t = a + sum_{i=0..n} g_i X_{t-i}`
//! - ARDL with reporting delay `k`: adds `b_j Y_{t-k-j}` for `j = 0..m-1`
//!
//! Coefficients are fitted by ordinary least squares through a Householder
//! QR factorization; rank deficiency is an error, never regularized away.

mod design;
mod ols;
mod spec;

pub use design::{build_design_matrix, design_row, DesignMatrix};
pub use ols::{fit_ols, least_squares, predict_week, write_coefficients_csv, FittedModel, LeastSquares, RANK_TOLERANCE};
pub use spec::{LagForm, ModelSpec};

#[derive(Debug, thiserror::Error)]
pub enum NowcastError {
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("offline and social series are not on the same week grid")]
    Misaligned,
    #[error("week {week} is before the burn-in week {burn_in}")]
    BurnIn { week: usize, burn_in: usize },
    #[error("week {week} is outside a series of length {len}")]
    OutOfRange { week: usize, len: usize },
    #[error("{rows} rows cannot determine {cols} coefficients")]
    Underdetermined { rows: usize, cols: usize },
    #[error("design matrix is rank deficient at column {column}")]
    SingularDesign { column: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
