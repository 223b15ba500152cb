use std::io::Write;

use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use super::StatsError;
use crate::nowcast::{least_squares, NowcastError};

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTerm {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSummary {
    /// Regressors in input order.
    pub terms: Vec<RegressionTerm>,
    pub intercept: RegressionTerm,
    pub n_obs: usize,
    pub df_model: usize,
    pub df_resid: usize,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub residual_std_error: f64,
    /// None for an intercept-only model.
    pub f_statistic: Option<f64>,
    pub f_p_value: Option<f64>,
}

/// `***` below 0.01, `**` below 0.05, `*` below 0.1.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

/// OLS with an intercept and classical inference.
pub fn fit_multiple_regression(columns: &[(String, Vec<f64>)], response: &[f64]) -> Result<RegressionSummary, StatsError> {
    let n = response.len();
    let p = columns.len();
    for (_, c) in columns {
        if c.len() != n {
            return Err(StatsError::LengthMismatch(c.len(), n));
        }
    }
    if n <= p + 1 {
        return Err(StatsError::DegenerateInput(format!("{n} observations for {p} regressors")));
    }
    if response.iter().chain(columns.iter().flat_map(|(_, c)| c)).any(|v| !v.is_finite()) {
        return Err(StatsError::DegenerateInput("non-finite value".into()));
    }

    let names: Vec<String> = std::iter::once("Constant".to_string()).chain(columns.iter().map(|(n, _)| n.clone())).collect();
    let x: Vec<Vec<f64>> = (0..n).map(|i| std::iter::once(1.0).chain(columns.iter().map(|(_, c)| c[i])).collect()).collect();
    let sol = least_squares(&x, response, &names).map_err(|e| match e {
        NowcastError::SingularDesign { column } => StatsError::SingularDesign { column },
        other => StatsError::DegenerateInput(other.to_string()),
    })?;

    let mean = response.iter().sum::<f64>() / n as f64;
    let sst: f64 = response.iter().map(|v| (v - mean).powi(2)).sum();
    if sst == 0.0 {
        return Err(StatsError::DegenerateInput("response has zero variance".into()));
    }
    let ssr: f64 = sol.residuals.iter().map(|e| e * e).sum();
    let df_resid = n - p - 1;
    let sigma2 = ssr / df_resid as f64;
    let r_squared = 1.0 - ssr / sst;
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / df_resid as f64;

    let t_dist = StudentsT::new(0.0, 1.0, df_resid as f64).expect("positive degrees of freedom");
    let terms: Vec<RegressionTerm> = names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let estimate = sol.coefficients[j];
            let std_error = (sigma2 * sol.xtx_inverse[j][j]).max(0.0).sqrt();
            let t_value = if std_error > 0.0 {
                estimate / std_error
            } else if estimate == 0.0 {
                0.0
            } else {
                estimate.signum() * f64::INFINITY
            };
            RegressionTerm { name: name.clone(), estimate, std_error, t_value, p_value: 2.0 * t_dist.sf(t_value.abs()) }
        })
        .collect();

    let (f_statistic, f_p_value) = if p == 0 {
        (None, None)
    } else {
        let f = if ssr > 0.0 { (r_squared / p as f64) / ((1.0 - r_squared) / df_resid as f64) } else { f64::INFINITY };
        let dist = FisherSnedecor::new(p as f64, df_resid as f64).expect("positive degrees of freedom");
        (Some(f), Some(if f.is_finite() { dist.sf(f) } else { 0.0 }))
    };

    let mut terms = terms.into_iter();
    let intercept = terms.next().expect("intercept term");
    Ok(RegressionSummary {
        terms: terms.collect(),
        intercept,
        n_obs: n,
        df_model: p,
        df_resid,
        r_squared,
        adj_r_squared,
        residual_std_error: sigma2.sqrt(),
        f_statistic,
        f_p_value,
    })
}

/// `row,value,detail,stars`: each regressor with its standard error, the
/// constant, then fit statistics.
pub fn write_regression_csv<W: Write>(s: &RegressionSummary, out: W) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "value", "detail", "stars"])?;
    for t in s.terms.iter().chain(std::iter::once(&s.intercept)) {
        w.write_record([t.name.as_str(), &t.estimate.to_string(), &t.std_error.to_string(), significance_stars(t.p_value)])?;
    }
    w.write_record(["Observations", &s.n_obs.to_string(), "", ""])?;
    w.write_record(["R2", &s.r_squared.to_string(), "", ""])?;
    w.write_record(["Adjusted R2", &s.adj_r_squared.to_string(), "", ""])?;
    w.write_record(["Residual Std. Error", &s.residual_std_error.to_string(), &format!("df = {}", s.df_resid), ""])?;
    if let (Some(f), Some(fp)) = (s.f_statistic, s.f_p_value) {
        w.write_record(["F Statistic", &f.to_string(), &format!("df = {}; {}", s.df_model, s.df_resid), significance_stars(fp)])?;
    }
    w.flush()?;
    Ok(())
}
