use statrs::distribution::{ContinuousCDF, Normal};

use super::StatsError;

/// Below this per-sample size the normal approximation is flagged.
pub const MIN_RELIABLE_SAMPLE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// Pairs with `a_i < b_j`, plus half the tied pairs.
    pub u: f64,
    pub z: f64,
    pub p_value: f64,
    pub significant: bool,
    /// False when either sample is smaller than [`MIN_RELIABLE_SAMPLE`].
    pub reliable: bool,
}

/// `U(a)` by direct pair counting. `U(a) + U(b) = |a||b|`.
pub fn u_statistic(a: &[f64], b: &[f64]) -> f64 {
    let twice: u64 = a
        .iter()
        .map(|x| b.iter().map(|y| if x < y { 2 } else if x == y { 1 } else { 0 }).sum::<u64>())
        .sum();
    twice as f64 / 2.0
}

/// Two-sided test with tie-corrected variance and continuity correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alpha: f64) -> Result<MannWhitney, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::DegenerateInput("empty sample".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::DegenerateInput("non-finite value".into()));
    }
    let u = u_statistic(a, b);
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let mean = n1 * n2 / 2.0;

    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let j = pooled[i..].iter().take_while(|&&v| v == pooled[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)).max(1.0));

    let (z, p_value) = if var <= 0.0 {
        (0.0, 1.0)
    } else {
        let d = u - mean;
        let corrected = d.signum() * (d.abs() - 0.5).max(0.0);
        let z = corrected / var.sqrt();
        let normal = Normal::standard();
        (z, (2.0 * normal.sf(z.abs())).min(1.0))
    };
    Ok(MannWhitney {
        u,
        z,
        p_value,
        significant: p_value < alpha,
        reliable: a.len().min(b.len()) >= MIN_RELIABLE_SAMPLE,
    })
}
