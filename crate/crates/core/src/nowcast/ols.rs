use std::io::Write;

use crate::corpus::WeeklySignal;

use super::{design_row, DesignMatrix, ModelSpec, NowcastError};

/// Relative threshold on `|R_jj|` against the original column norm.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Solution of a dense least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `(X^T X)^{-1}`, from `R^{-1} R^{-T}`.
    pub xtx_inverse: Vec<Vec<f64>>,
}

/// Householder QR least squares on row-major `x`.
///
/// `names` labels columns for the singular-design error.
pub fn least_squares(x: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<LeastSquares, NowcastError> {
    let m = x.len();
    let n = names.len();
    if m < n || n == 0 {
        return Err(NowcastError::Underdetermined { rows: m, cols: n });
    }
    // Column-major working copy.
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| x.iter().map(|r| r[j]).collect()).collect();
    let norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();
    let mut qty = y.to_vec();

    for k in 0..n {
        let alpha = norm(&a[k][k..]);
        if alpha <= RANK_TOLERANCE * norms[k] || alpha == 0.0 {
            return Err(NowcastError::SingularDesign { column: names[k].clone() });
        }
        let alpha = if a[k][k] > 0.0 { -alpha } else { alpha };
        let mut v = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm = norm(&v);
        if vnorm > 0.0 {
            v.iter_mut().for_each(|e| *e /= vnorm);
            for col in a.iter_mut().skip(k) {
                reflect(&v, &mut col[k..]);
            }
            reflect(&v, &mut qty[k..]);
        }
        if a[k][k].abs() <= RANK_TOLERANCE * norms[k] {
            return Err(NowcastError::SingularDesign { column: names[k].clone() });
        }
    }

    // Back substitution on R b = Q^T y.
    let mut coefficients = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| a[j][i] * coefficients[j]).sum();
        coefficients[i] = (qty[i] - s) / a[i][i];
    }

    // R^{-1}, upper triangular, column by column.
    let mut rinv = vec![vec![0.0; n]; n];
    for c in 0..n {
        for i in (0..=c).rev() {
            let rhs = if i == c { 1.0 } else { 0.0 };
            let s: f64 = ((i + 1)..=c).map(|j| a[j][i] * rinv[j][c]).sum();
            rinv[i][c] = (rhs - s) / a[i][i];
        }
    }
    let xtx_inverse = (0..n)
        .map(|i| (0..n).map(|j| (i.max(j)..n).map(|l| rinv[i][l] * rinv[j][l]).sum()).collect())
        .collect();

    let residuals = x.iter().zip(y).map(|(row, &t)| t - dot(row, &coefficients)).collect();
    Ok(LeastSquares { coefficients, residuals, xtx_inverse })
}

fn norm(v: &[f64]) -> f64 {
    // Scaled to avoid overflow on large counts.
    let scale = v.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|e| (e / scale).powi(2)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reflect(v: &[f64], target: &mut [f64]) {
    let d = 2.0 * dot(v, target);
    target.iter_mut().zip(v).for_each(|(t, vi)| *t -= d * vi);
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub spec: ModelSpec,
    pub column_names: Vec<String>,
    /// Intercept, then social lags, then offline lags.
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub train_indices: Vec<usize>,
    /// Regressor columns that were constant over the training rows. They
    /// carry no information beyond the intercept and are fixed at zero.
    pub constant_columns: Vec<String>,
}

/// Fits by least squares.
///
/// A regressor that is exactly constant over the training rows is aliased
/// with the intercept; it is pinned to zero so the fit degrades to the
/// remaining terms. Any other rank deficiency is an error.
pub fn fit_ols(dm: &DesignMatrix) -> Result<FittedModel, NowcastError> {
    let cols = dm.n_cols();
    if dm.n_rows() < cols {
        return Err(NowcastError::Underdetermined { rows: dm.n_rows(), cols });
    }
    let active: Vec<usize> = (0..cols)
        .filter(|&j| j == 0 || dm.rows.iter().any(|r| r[j] != dm.rows[0][j]))
        .collect();
    let x: Vec<Vec<f64>> = dm.rows.iter().map(|r| active.iter().map(|&j| r[j]).collect()).collect();
    let names: Vec<String> = active.iter().map(|&j| dm.column_names[j].clone()).collect();
    let sol = least_squares(&x, &dm.targets, &names)?;

    let mut coefficients = vec![0.0; cols];
    for (&j, &c) in active.iter().zip(&sol.coefficients) {
        coefficients[j] = c;
    }
    let constant_columns = (0..cols).filter(|j| !active.contains(j)).map(|j| dm.column_names[j].clone()).collect();
    Ok(FittedModel {
        spec: dm.spec,
        column_names: dm.column_names.clone(),
        coefficients,
        residuals: sol.residuals,
        train_indices: dm.target_indices.clone(),
        constant_columns,
    })
}

impl FittedModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        dot(row, &self.coefficients)
    }
}

pub fn predict_week(model: &FittedModel, y: &WeeklySignal, x: &WeeklySignal, t: usize) -> Result<f64, NowcastError> {
    Ok(model.predict_row(&design_row(y, x, &model.spec, t)?))
}

/// `name,value` rows, intercept first.
pub fn write_coefficients_csv<W: Write>(model: &FittedModel, out: W) -> Result<(), NowcastError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "value"])?;
    for (name, value) in model.column_names.iter().zip(&model.coefficients) {
        w.write_record([name.as_str(), &value.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nowcast::build_design_matrix;
    use chrono::NaiveDate;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    /// Normal equations solved by Gauss-Jordan with partial pivoting.
    fn normal_equations_oracle(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let n = x[0].len();
        let mut aug = vec![vec![0.0; n + 1]; n];
        for (row, &t) in x.iter().zip(y) {
            for i in 0..n {
                for j in 0..n {
                    aug[i][j] += row[i] * row[j];
                }
                aug[i][n] += row[i] * t;
            }
        }
        for c in 0..n {
            let p = (c..n).max_by(|&a, &b| aug[a][c].abs().total_cmp(&aug[b][c].abs())).unwrap();
            aug.swap(c, p);
            let piv = aug[c][c];
            aug[c].iter_mut().for_each(|e| *e /= piv);
            for r in 0..n {
                if r != c {
                    let f = aug[r][c];
                    let src = aug[c].clone();
                    aug[r].iter_mut().zip(&src).for_each(|(e, s)| *e -= f * s);
                }
            }
        }
        aug.iter().map(|r| r[n]).collect()
    }

    fn signal(values: Vec<f64>) -> WeeklySignal {
        WeeklySignal::new(NaiveDate::from_ymd_opt(2014, 1, 6).unwrap(), values).unwrap()
    }

    #[test]
    fn exact_linear_data() {
        let x: Vec<Vec<f64>> = (0..8).map(|i| vec![1.0, i as f64 * 0.7 + 1.3]).collect();
        let y: Vec<f64> = x.iter().map(|r| 2.0 * r[1] + 1.0).collect();
        let s = least_squares(&x, &y, &names(2)).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-9);
        assert!((s.coefficients[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn duplicated_column_is_singular() {
        let x: Vec<Vec<f64>> = (0..8).map(|i| vec![1.0, i as f64, (i * i) as f64, i as f64]).collect();
        let y: Vec<f64> = (0..8).map(|i| i as f64).collect();
        assert!(matches!(least_squares(&x, &y, &names(4)), Err(NowcastError::SingularDesign { column }) if column == "c3"));
    }

    #[test]
    fn too_few_rows() {
        let x = vec![vec![1.0, 2.0]];
        assert!(matches!(least_squares(&x, &[1.0], &names(2)), Err(NowcastError::Underdetermined { .. })));
    }

    #[test]
    fn random_system_matches_normal_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x: Vec<Vec<f64>> = (0..12).map(|_| vec![1.0, rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).collect();
            let y: Vec<f64> = (0..12).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let qr = least_squares(&x, &y, &names(3)).unwrap();
            let ne = normal_equations_oracle(&x, &y);
            for (a, b) in qr.coefficients.iter().zip(&ne) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn xtx_inverse_is_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Vec<f64>> = (0..15).map(|_| vec![1.0, rng.gen_range(0.0..9.0), rng.gen_range(0.0..9.0)]).collect();
        let y: Vec<f64> = (0..15).map(|_| rng.gen::<f64>()).collect();
        let s = least_squares(&x, &y, &names(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let xtx_row: Vec<f64> = (0..3).map(|l| x.iter().map(|r| r[i] * r[l]).sum()).collect();
                let v: f64 = (0..3).map(|l| xtx_row[l] * s.xtx_inverse[l][j]).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn identity_model_prediction() {
        let model = FittedModel {
            spec: ModelSpec::lagged_linear(0),
            column_names: ModelSpec::lagged_linear(0).column_names(),
            coefficients: vec![0.0, 1.0],
            residuals: vec![],
            train_indices: vec![],
            constant_columns: vec![],
        };
        let x = signal(vec![1.0, 2.0, 5.0]);
        assert_eq!(predict_week(&model, &x, &x, 2).unwrap(), 5.0);
    }

    #[test]
    fn constant_regressor_reduces_to_mean() {
        let y = signal(vec![3.0, 5.0, 4.0, 8.0, 10.0, 6.0]);
        let x = signal(vec![2.0; 6]);
        let spec = ModelSpec::lagged_linear(0);
        let dm = build_design_matrix(&y, &x, &spec, &[0, 1, 2, 3, 4]).unwrap();
        let m = fit_ols(&dm).unwrap();
        assert_eq!(m.constant_columns, vec!["x_t"]);
        assert!((predict_week(&m, &y, &x, 5).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn coefficient_csv() {
        let y = signal((0..10).map(|i| 2.0 * i as f64 + 1.0).collect());
        let x = signal((0..10).map(|i| i as f64).collect());
        let m = fit_ols(&build_design_matrix(&y, &x, &ModelSpec::lagged_linear(0), &(0..10).collect::<Vec<_>>()).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_coefficients_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("name,value\nintercept,"));
        assert!(text.contains("\nx_t,"));
    }

    fn series_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (12usize..30).prop_flat_map(|len| (prop::collection::vec(0.0..100.0f64, len), prop::collection::vec(1.0..100.0f64, len)))
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_and_reproduce_targets((xs, ys) in series_strategy()) {
            let (x, y) = (signal(xs), signal(ys));
            let spec = ModelSpec::ardl(1, 2, 1);
            let targets: Vec<usize> = (spec.burn_in()..x.len()).collect();
            let dm = build_design_matrix(&y, &x, &spec, &targets).unwrap();
            if let Ok(m) = fit_ols(&dm) {
                prop_assert_eq!(m.residuals.len(), dm.n_rows());
                for j in 0..dm.n_cols() {
                    let col_norm: f64 = dm.rows.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
                    let res_norm: f64 = m.residuals.iter().map(|e| e * e).sum::<f64>().sqrt();
                    let d: f64 = dm.rows.iter().zip(&m.residuals).map(|(r, e)| r[j] * e).sum();
                    prop_assert!(d.abs() <= 1e-7 * (col_norm * res_norm).max(1.0));
                }
                for ((row, &t), e) in dm.rows.iter().zip(&dm.targets).zip(&m.residuals) {
                    prop_assert!((m.predict_row(row) + e - t).abs() <= 1e-12 * t.abs().max(1.0));
                }
            }
        }

        #[test]
        fn affine_rescaling_of_x_preserves_predictions((xs, ys) in series_strategy(), c in 0.01..50.0f64, shift in 0.0..20.0f64) {
            let (x, y) = (signal(xs.clone()), signal(ys));
            let x2 = signal(xs.iter().map(|v| c * v + shift).collect());
            let spec = ModelSpec::lagged_linear(1);
            let last = x.len() - 1;
            let targets: Vec<usize> = (1..last).collect();
            let a = fit_ols(&build_design_matrix(&y, &x, &spec, &targets).unwrap());
            let b = fit_ols(&build_design_matrix(&y, &x2, &spec, &targets).unwrap());
            if let (Ok(a), Ok(b)) = (a, b) {
                let pa = predict_week(&a, &y, &x, last).unwrap();
                let pb = predict_week(&b, &y, &x2, last).unwrap();
                prop_assert!((pa - pb).abs() <= 1e-7 * pa.abs().max(1.0), "{} vs {}", pa, pb);
            }
        }
    }
}
