use super::BacktestError;

/// Absolute percentage error; `actual` must be positive.
pub fn ape(actual: f64, predicted: f64) -> Result<f64, BacktestError> {
    if !(actual > 0.0) || !actual.is_finite() {
        return Err(BacktestError::Domain { week: 0, actual });
    }
    Ok(100.0 * (actual - predicted).abs() / actual)
}

/// Mean of per-case APEs over `(actual, predicted)` pairs.
pub fn mape(pairs: &[(f64, f64)]) -> Result<f64, BacktestError> {
    if pairs.is_empty() {
        return Err(BacktestError::Empty);
    }
    let mut sum = 0.0;
    for &(a, p) in pairs {
        sum += ape(a, p)?;
    }
    Ok(sum / pairs.len() as f64)
}

/// Linear-interpolation quantile of sorted data: position `(n-1)p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
