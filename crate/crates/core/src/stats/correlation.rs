use super::{check_pair, StatsError};

/// Product-moment correlation, two-pass for stability.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_pair(x, y, 3)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateInput("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_pair(x, y, 3)?;
    pearson_r(&average_ranks(x), &average_ranks(y))
}

/// Pair classification behind tau-b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KendallCounts {
    pub concordant: u64,
    pub discordant: u64,
    /// Pairs tied in x (including those also tied in y).
    pub tied_x: u64,
    pub tied_y: u64,
    pub pairs: u64,
}

pub fn kendall_counts(x: &[f64], y: &[f64]) -> Result<KendallCounts, StatsError> {
    check_pair(x, y, 2)?;
    let mut c = KendallCounts::default();
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            c.pairs += 1;
            let dx = x[i].total_cmp(&x[j]);
            let dy = y[i].total_cmp(&y[j]);
            let (tx, ty) = (x[i] == x[j], y[i] == y[j]);
            c.tied_x += tx as u64;
            c.tied_y += ty as u64;
            if !tx && !ty {
                if dx == dy {
                    c.concordant += 1;
                } else {
                    c.discordant += 1;
                }
            }
        }
    }
    Ok(c)
}

/// Kendall tau-b: `(C - D) / sqrt((n0 - n1)(n0 - n2))`.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    let c = kendall_counts(x, y)?;
    let denom = ((c.pairs - c.tied_x) as f64 * (c.pairs - c.tied_y) as f64).sqrt();
    if denom == 0.0 {
        return Err(StatsError::DegenerateInput("all values tied".into()));
    }
    Ok(((c.concordant as f64 - c.discordant as f64) / denom).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson_r(&x, &x.map(|v| 2.0 * v + 1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_r(&x, &x.map(|v| -v)).unwrap() + 1.0).abs() < 1e-15);
        // cov = 1.0, var_x = var_y = 1.25 (population), so r = 0.8
        let r = pearson_r(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        assert!(matches!(pearson_r(&x, &[2.0; 4]), Err(StatsError::DegenerateInput(_))));
        assert!(matches!(pearson_r(&x, &[1.0; 3]), Err(StatsError::LengthMismatch(4, 3))));
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 3.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[5.0, 1.0, 5.0, 5.0]), vec![3.0, 1.0, 3.0, 3.0]);
    }

    #[test]
    fn spearman_examples() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!((spearman_rho(&x, &x.map(|v: f64| v.powi(3))).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman_rho(&x, &x.map(|v: f64| (-v).exp())).unwrap() + 1.0).abs() < 1e-15);
        // ranks [1, 2.5, 2.5, 4] vs [1,2,3,4]: sxy = 4.5, sxx = 4.5, syy = 5
        let rho = spearman_rho(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((rho - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kendall_examples() {
        assert!((kendall_tau(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let x = [3.0, 1.0, 4.0, 1.5, 5.0];
        assert_eq!(kendall_tau(&x, &x).unwrap(), 1.0);
        assert_eq!(kendall_tau(&x, &x.map(|v| -v)).unwrap(), -1.0);
        assert!(matches!(kendall_tau(&[1.0, 1.0], &[1.0, 2.0]), Err(StatsError::DegenerateInput(_))));
    }

    proptest! {
        #[test]
        fn affine_and_monotone_invariance(
            pts in prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), 4..20),
            a in 0.1..10.0f64, b in -50.0..50.0f64,
        ) {
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            if let Ok(r) = pearson_r(&x, &y) {
                let x2: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let y2: Vec<f64> = y.iter().map(|v| a * v - b).collect();
                prop_assert!((pearson_r(&x2, &y2).unwrap() - r).abs() < 1e-9);
            }
            let xm: Vec<f64> = x.iter().map(|v| v.powi(3) + 1.0).collect();
            if let Ok(rho) = spearman_rho(&x, &y) {
                prop_assert!((spearman_rho(&xm, &y).unwrap() - rho).abs() < 1e-12);
            }
            if let Ok(tau) = kendall_tau(&x, &y) {
                prop_assert_eq!(kendall_tau(&xm, &y).unwrap(), tau);
            }
        }

        #[test]
        fn tau_and_rho_agree_in_sign_on_monotone(x in prop::collection::hash_set(0i32..1000, 3..15), up in any::<bool>()) {
            let x: Vec<f64> = x.into_iter().map(f64::from).collect();
            let y: Vec<f64> = x.iter().map(|v| if up { v.sqrt() } else { -v.sqrt() }).collect();
            let tau = kendall_tau(&x, &y).unwrap();
            let rho = spearman_rho(&x, &y).unwrap();
            prop_assert_eq!(tau.signum(), rho.signum());
        }
    }
}
