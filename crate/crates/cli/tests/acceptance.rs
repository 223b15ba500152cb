//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; any failure makes the process exit 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Context as _, Result};
use chrono::{NaiveDate, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::Rng;

use sensecast::backtest::{generate_split_plan, run_backtest, PlanKind};
use sensecast::cohorts::{geo_weighted_signal, w_less, w_more};
use sensecast::corpus::{weekly_unique_user_counts, TweetRecord, UserProfile, WeekGrid, WeeklySignal};
use sensecast::demographics::{compute_penetration_table, StateCode};
use sensecast::firstperson::{
    build_vocabulary, classify, default_stopwords, evaluate_classifier, featurize, train_first_person_model, ForestHyperparams, Label,
    LabeledTweet, Vocabulary,
};
use sensecast::nowcast::{build_design_matrix, design_row, fit_ols, DesignMatrix, ModelSpec, NowcastError};
use sensecast::seed::rng_for;
use sensecast::stats::{
    fit_multiple_regression, kendall_counts, kendall_tau, mann_whitney_u, spearman_rho, u_statistic, KendallCounts, StatsError,
};
use sensecast_cli::{execute, Cli, Command};

type Check = fn() -> Result<String>;

fn main() {
    let criteria: [(u32, &str, u64, Check); 10] = [
        (1, "split protocol counts", 1, split_protocol),
        (2, "lag layout by index inspection", 1, lag_layout),
        (3, "least squares against a normal-equations oracle", 5, ols_oracle),
        (4, "activity weight formulas", 1, weight_formulas),
        (5, "geographic reweighting", 1, geo_reweighting),
        (6, "rank statistics against enumeration oracles", 5, rank_statistics),
        (7, "first-person classifier", 30, classifier),
        (8, "first-person cohort beats all tweets", 60, hypothesis_direction),
        (9, "subsampling robustness", 120, subsampling),
        (10, "reproducible across thread counts", 120, reproducibility),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (n, name, budget, check) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(anyhow!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            ensure!(took <= Duration::from_secs(budget), "took {:.1}s, budget {budget}s ({detail})", took.as_secs_f64());
            Ok(detail)
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {n}: {name} ({detail}; {:.2}s)", took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {n}: {name}: {e:#}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-12)
}

fn monday() -> NaiveDate {
    NaiveDate::from_ymd_opt(2014, 1, 6).unwrap()
}

fn signal(values: Vec<f64>) -> WeeklySignal {
    WeeklySignal::new(monday(), values).unwrap()
}

// 1

fn split_protocol() -> Result<String> {
    let plan = generate_split_plan(47, 25)?;
    ensure!(plan.n_moving() == 253, "moving cases {}", plan.n_moving());
    ensure!(plan.n_extending() == 231, "extending cases {}", plan.n_extending());
    ensure!(plan.cases.len() == 484, "total cases {}", plan.cases.len());
    for len in 26..=60 {
        let p = generate_split_plan(len, 25)?;
        let d = len - 25;
        ensure!(p.n_moving() == d * (d + 1) / 2, "L={len}: moving {}", p.n_moving());
        ensure!(p.n_extending() == d * (d - 1) / 2, "L={len}: extending {}", p.n_extending());
        for (i, c) in p.cases.iter().enumerate() {
            ensure!(c.case_id == i && c.test_week > c.train_end && c.test_week < len, "L={len}: bad case {c:?}");
            match c.kind {
                PlanKind::Moving => ensure!(c.train_len() == 25, "L={len}: moving window {c:?}"),
                PlanKind::Extending => ensure!(c.train_start == 0 && c.train_len() > 25, "L={len}: extending window {c:?}"),
            }
        }
    }
    Ok("253 + 231 = 484; closed form holds for L in 26..=60".into())
}

// 2

fn lag_layout() -> Result<String> {
    let n = 30;
    let x = signal((0..n).map(|t| 1000.0 + t as f64).collect());
    let y = signal((0..n).map(|t| 2000.0 + t as f64).collect());
    let xi = |v: f64| format!("x{}", v - 1000.0);
    let yi = |v: f64| format!("y{}", v - 2000.0);
    // Decode a row back into series indices by value.
    let decode = |row: &[f64], nx: usize| -> Vec<String> {
        row[1..].iter().enumerate().map(|(j, &v)| if j < nx { xi(v) } else { yi(v) }).collect()
    };
    type Lags = fn(usize) -> Vec<usize>;
    let cases: [(ModelSpec, usize, usize, Lags, Lags); 2] = [
        (ModelSpec::ardl(2, 2, 1), 3, 2, |t| vec![t, t - 1], |t| vec![t - 2, t - 3]),
        (ModelSpec::ardl(4, 2, 3), 5, 4, |t| vec![t, t - 1, t - 2, t - 3], |t| vec![t - 4, t - 5]),
    ];
    for (spec, burn_in, nx, xs, ys) in cases {
        ensure!(matches!(design_row(&y, &x, &spec, burn_in - 1), Err(NowcastError::BurnIn { .. })), "{spec:?}: row below burn-in accepted");
        let targets: Vec<usize> = (burn_in..n).collect();
        let dm = build_design_matrix(&y, &x, &spec, &targets)?;
        ensure!(dm.n_rows() == targets.len(), "row count");
        for (row, &t) in dm.rows.iter().zip(&targets) {
            ensure!(row[0] == 1.0, "intercept");
            let want: Vec<String> = xs(t).into_iter().map(|i| format!("x{i}")).chain(ys(t).into_iter().map(|i| format!("y{i}"))).collect();
            ensure!(decode(row, nx) == want, "{spec:?} t={t}: got {:?}, want {want:?}", decode(row, nx));
        }
        ensure!(dm.targets.iter().zip(&targets).all(|(&v, &t)| v == 2000.0 + t as f64), "targets");
    }
    Ok("(2,2,1) -> X_t, X_t-1, Y_t-2, Y_t-3; (4,2,3) -> X_t..X_t-3, Y_t-4, Y_t-5".into())
}

// 3

struct Oracle {
    beta: Vec<f64>,
    se: Vec<f64>,
    r2: f64,
    adj: f64,
    f: f64,
}

/// Normal equations solved by Gauss-Jordan inversion of `X^T X`.
fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Oracle {
    let (n, p) = (x.len(), x[0].len());
    let mut a: Vec<Vec<f64>> =
        (0..p).map(|i| (0..2 * p).map(|j| if j < p { (0..n).map(|r| x[r][i] * x[r][j]).sum() } else { f64::from(u8::from(j - p == i)) }).collect()).collect();
    for c in 0..p {
        let pivot = (c..p).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, pivot);
        let d = a[c][c];
        a[c].iter_mut().for_each(|v| *v /= d);
        for r in 0..p {
            if r != c {
                let f = a[r][c];
                let pivot_row = a[c].clone();
                a[r].iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
            }
        }
    }
    let inv: Vec<Vec<f64>> = a.iter().map(|r| r[p..].to_vec()).collect();
    let xty: Vec<f64> = (0..p).map(|i| (0..n).map(|r| x[r][i] * y[r]).sum()).collect();
    let beta: Vec<f64> = (0..p).map(|i| (0..p).map(|j| inv[i][j] * xty[j]).sum()).collect();
    let ssr: f64 = (0..n).map(|r| (y[r] - (0..p).map(|j| x[r][j] * beta[j]).sum::<f64>()).powi(2)).sum();
    let mean = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let df = (n - p) as f64;
    let r2 = 1.0 - ssr / sst;
    Oracle {
        se: (0..p).map(|j| (ssr / df * inv[j][j]).sqrt()).collect(),
        beta,
        r2,
        adj: 1.0 - (1.0 - r2) * (n as f64 - 1.0) / df,
        f: (r2 / (p - 1) as f64) / ((1.0 - r2) / df),
    }
}

fn ols_oracle() -> Result<String> {
    let mut rng = rng_for(7, "acceptance-ols", 0);
    for sys in 0..200 {
        let n = rng.gen_range(8..=40);
        let p = rng.gen_range(2..=6);
        let truth: Vec<f64> = (0..p).map(|_| rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let columns: Vec<(String, Vec<f64>)> = (1..p).map(|j| (format!("v{j}"), (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())).collect();
        let x: Vec<Vec<f64>> = (0..n).map(|i| std::iter::once(1.0).chain(columns.iter().map(|(_, c)| c[i])).collect()).collect();
        let y: Vec<f64> = x.iter().map(|r| r.iter().zip(&truth).map(|(a, b)| a * b).sum::<f64>() + rng.gen_range(-1.0..1.0)).collect();

        let want = normal_equations(&x, &y);
        let got = fit_multiple_regression(&columns, &y)?;
        let terms: Vec<_> = std::iter::once(&got.intercept).chain(&got.terms).collect();
        for (j, t) in terms.iter().enumerate() {
            ensure!(close(t.estimate, want.beta[j], 1e-8), "system {sys} ({n}x{p}) coefficient {j}: {} vs {}", t.estimate, want.beta[j]);
            ensure!(close(t.std_error, want.se[j], 1e-8), "system {sys} standard error {j}: {} vs {}", t.std_error, want.se[j]);
        }
        ensure!(close(got.r_squared, want.r2, 1e-8), "system {sys} R2 {} vs {}", got.r_squared, want.r2);
        ensure!(close(got.adj_r_squared, want.adj, 1e-8), "system {sys} adjusted R2 {} vs {}", got.adj_r_squared, want.adj);
        let f = got.f_statistic.context("missing F")?;
        ensure!(close(f, want.f, 1e-8), "system {sys} F {f} vs {}", want.f);

        let names: Vec<String> = (0..p).map(|j| format!("c{j}")).collect();
        let dm = DesignMatrix { spec: ModelSpec::lagged_linear(0), column_names: names, rows: x.clone(), targets: y.clone(), target_indices: (0..n).collect() };
        let fit = fit_ols(&dm)?;
        for j in 0..p {
            ensure!(close(fit.coefficients[j], want.beta[j], 1e-8), "system {sys} fit_ols coefficient {j}");
        }
    }

    // Exact fit.
    let xs: Vec<f64> = (0..12).map(|i| (i * i % 7) as f64 + 0.5 * i as f64).collect();
    let zs: Vec<f64> = (0..12).map(|i| ((i * 5) % 11) as f64).collect();
    let y: Vec<f64> = xs.iter().zip(&zs).map(|(a, b)| 1.0 + 2.0 * a - 3.0 * b).collect();
    let s = fit_multiple_regression(&[("a".into(), xs.clone()), ("b".into(), zs.clone())], &y)?;
    ensure!((s.r_squared - 1.0).abs() < 1e-12 && (s.adj_r_squared - 1.0).abs() < 1e-12, "exact fit R2 {}", s.r_squared);
    ensure!(s.residual_std_error < 1e-9, "exact fit residual SE {}", s.residual_std_error);
    ensure!(close(s.intercept.estimate, 1.0, 1e-9) && close(s.terms[0].estimate, 2.0, 1e-9) && close(s.terms[1].estimate, -3.0, 1e-9), "exact coefficients");

    // Rank deficiency is an error, never regularized away.
    let sum: Vec<f64> = xs.iter().zip(&zs).map(|(a, b)| a + b).collect();
    for extra in [xs.clone(), sum] {
        let cols = [("a".to_string(), xs.clone()), ("b".to_string(), zs.clone()), ("dup".to_string(), extra)];
        let r = fit_multiple_regression(&cols, &y);
        ensure!(matches!(r, Err(StatsError::SingularDesign { .. })), "rank-deficient regression accepted: {r:?}");
        let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![1.0, cols[0].1[i], cols[1].1[i], cols[2].1[i]]).collect();
        let dm = DesignMatrix {
            spec: ModelSpec::lagged_linear(0),
            column_names: ["i", "a", "b", "dup"].map(String::from).to_vec(),
            rows,
            targets: y.clone(),
            target_indices: (0..12).collect(),
        };
        ensure!(matches!(fit_ols(&dm), Err(NowcastError::SingularDesign { .. })), "rank-deficient design accepted");
    }
    Ok("200 systems within 1e-8; exact fit R2 = 1; duplicate and collinear columns rejected".into())
}

// 4

fn weight_formulas() -> Result<String> {
    ensure!(w_less(0.0) == 1.0, "w_less(0) = {}", w_less(0.0));
    ensure!(w_less(90.0) == 0.5, "w_less(90) = {}", w_less(90.0));
    ensure!(w_less(990.0) == 1.0 / 3.0, "w_less(990) = {}", w_less(990.0));
    let mut rng = rng_for(7, "acceptance-weights", 0);
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let c = rng.gen_range(0u64..1_000_000_000) as f64;
        worst = worst.max((w_less(c) * w_more(c) - 1.0).abs());
    }
    ensure!(worst < 1e-15, "product deviates by {worst}");
    Ok(format!("exact values hold; max |w_less*w_more - 1| = {worst:e}"))
}

// 5

fn tweet(id: usize, user: &str, week: usize) -> TweetRecord {
    TweetRecord {
        tweet_id: id.to_string(),
        author_id: user.into(),
        text: "flu".into(),
        created_at: Utc.with_ymd_and_hms(2014, 1, 6, 12, 0, 0).unwrap() + chrono::Duration::weeks(week as i64),
        lang: "en".into(),
        geo: None,
        topic_keywords_hit: vec![],
    }
}

fn geo_reweighting() -> Result<String> {
    let (ny, ca, tx) = (StateCode::parse("NY").unwrap(), StateCode::parse("CA").unwrap(), StateCode::parse("TX").unwrap());

    // Three users in NY at rate 0.1, four in CA at rate 0.2.
    let grid = WeekGrid::new(monday(), 2);
    let mut records = Vec::new();
    let mut states = BTreeMap::new();
    for i in 0..7 {
        let u = format!("u{i}");
        records.push(tweet(i, &u, 1));
        states.insert(u, Some(if i < 3 { ny } else { ca }));
    }
    let cohort: BTreeSet<String> = states.keys().cloned().collect();
    let table = compute_penetration_table(&[(ny, 10), (ca, 20)].into(), &[(ny, 100.0), (ca, 100.0)].into())?;
    let s = geo_weighted_signal(&records, &cohort, &states, &table, &grid)?;
    ensure!(s.values == vec![0.0, 50.0], "hand example gave {:?}", s.values);

    // Random activity over three states.
    let weeks = 32;
    let grid = WeekGrid::new(monday(), weeks);
    let mut rng = rng_for(7, "acceptance-geo", 0);
    let all = [ny, ca, tx];
    let mut states = BTreeMap::new();
    let mut records = Vec::new();
    for u in 0..300 {
        let id = format!("u{u}");
        states.insert(id.clone(), Some(*all.choose(&mut rng).unwrap()));
        for w in 0..weeks {
            let p = 0.2 + 0.6 * ((w as f64) / 5.0).sin().abs();
            if rng.gen_bool(p) {
                records.push(tweet(records.len(), &id, w));
            }
        }
    }
    let cohort: BTreeSet<String> = states.keys().cloned().collect();

    let equal = compute_penetration_table(&[(ny, 4), (ca, 8), (tx, 2)].into(), &[(ny, 20.0), (ca, 40.0), (tx, 10.0)].into())?;
    let uniform = weekly_unique_user_counts(&records, &grid)?;
    let geo = geo_weighted_signal(&records, &cohort, &states, &equal, &grid)?;
    for (g, u) in geo.values.iter().zip(&uniform.values) {
        ensure!(close(*g, u / 0.2, 1e-12), "equal rates: {g} vs {}", u / 0.2);
    }

    let users = [(ny, 30), (ca, 55), (tx, 12)].into();
    let pop: BTreeMap<StateCode, f64> = [(ny, 19.5e6), (ca, 38.8e6), (tx, 26.9e6)].into();
    let scaled: BTreeMap<StateCode, f64> = pop.iter().map(|(s, p)| (*s, p * 7.3)).collect();
    let x1 = geo_weighted_signal(&records, &cohort, &states, &compute_penetration_table(&users, &pop)?, &grid)?;
    let x2 = geo_weighted_signal(&records, &cohort, &states, &compute_penetration_table(&users, &scaled)?, &grid)?;
    let y = signal((0..weeks).map(|w| 500.0 + 3.0 * uniform.values[w] + 40.0 * ((w as f64) * 1.3).cos()).collect());
    let plan = generate_split_plan(weeks, 25)?;
    let spec = ModelSpec::lagged_linear(1);
    let (a, b) = (run_backtest("a", &y, &x1, &spec, &plan)?, run_backtest("b", &y, &x2, &spec, &plan)?);
    ensure!(a.results.len() == plan.cases.len() && b.results.len() == plan.cases.len(), "failed cases");
    let mut worst = 0.0_f64;
    for (ra, rb) in a.results.iter().zip(&b.results) {
        worst = worst.max((ra.predicted - rb.predicted).abs() / ra.predicted.abs());
    }
    ensure!(worst < 1e-7, "predictions differ by {worst:e} relative");
    Ok(format!("hand example 50.0; equal rates = uniform / r; rescaled refit predictions agree to {worst:.1e}"))
}

// 6

fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let below = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn brute_pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    (va > 0.0 && vb > 0.0).then(|| cov / (va * vb).sqrt())
}

/// Small integer ranges force ties; the rest are continuous.
fn draw<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    if rng.gen_bool(0.5) {
        (0..n).map(|_| rng.gen_range(0..5) as f64).collect()
    } else {
        (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()
    }
}

fn rank_statistics() -> Result<String> {
    let mut rng = rng_for(7, "acceptance-ranks", 0);
    let mut defined = 0;
    for sample in 0..500 {
        let n = rng.gen_range(2..=12);
        let x = draw(n, &mut rng);
        let y = draw(n, &mut rng);

        // Fewer than three observations are rejected by contract.
        let oracle = if n < 3 { None } else { brute_pearson(&brute_ranks(&x), &brute_ranks(&y)) };
        match (oracle, spearman_rho(&x, &y)) {
            (Some(want), Ok(got)) => {
                defined += 1;
                ensure!((want - got).abs() <= 1e-12, "sample {sample}: rho {got} vs {want}");
            }
            (None, Err(_)) => {}
            (want, got) => return Err(anyhow!("sample {sample}: rho {got:?} vs oracle {want:?}")),
        }

        let mut k = KendallCounts::default();
        for i in 0..n {
            for j in i + 1..n {
                k.pairs += 1;
                let (tx, ty) = (x[i] == x[j], y[i] == y[j]);
                k.tied_x += u64::from(tx);
                k.tied_y += u64::from(ty);
                if !tx && !ty {
                    if (x[i] < x[j]) == (y[i] < y[j]) {
                        k.concordant += 1;
                    } else {
                        k.discordant += 1;
                    }
                }
            }
        }
        ensure!(kendall_counts(&x, &y)? == k, "sample {sample}: Kendall counts differ");
        let denom = (((k.pairs - k.tied_x) * (k.pairs - k.tied_y)) as f64).sqrt();
        match kendall_tau(&x, &y) {
            Ok(t) => ensure!(denom > 0.0 && (t - (k.concordant as f64 - k.discordant as f64) / denom).abs() <= 1e-12, "sample {sample}: tau {t}"),
            Err(_) => ensure!(denom == 0.0, "sample {sample}: tau rejected"),
        }

        let m = rng.gen_range(1..=12);
        let b = draw(m, &mut rng);
        let mut twice = 0u64;
        for ai in &x {
            for bj in &b {
                twice += if ai < bj { 2 } else if ai == bj { 1 } else { 0 };
            }
        }
        let u = twice as f64 / 2.0;
        ensure!(u_statistic(&x, &b) == u, "sample {sample}: U {} vs {u}", u_statistic(&x, &b));
        let test = mann_whitney_u(&x, &b, 0.05)?;
        ensure!(test.u == u, "sample {sample}: test U {}", test.u);
        ensure!(u_statistic(&b, &x) == (n * m) as f64 - u, "sample {sample}: U(a) + U(b) != n1 n2");
    }
    Ok(format!("500 samples ({defined} with defined rho); U and Kendall counts exact, rho within 1e-12"))
}


// 7

fn separable_set(seed: u64, n: usize) -> Vec<LabeledTweet> {
    let mut rng = rng_for(seed, "acceptance-separable", 0);
    let created = Utc.with_ymd_and_hms(2014, 3, 3, 12, 0, 0).unwrap();
    (0..n)
        .map(|i| {
            let label = if rng.gen_bool(0.4) { Label::FirstPerson } else { Label::Other };
            let pool = if label == Label::FirstPerson { "fp" } else { "ot" };
            let words: Vec<String> = (0..5).map(|_| format!("{pool}{}", rng.gen_range(0..250))).collect();
            let text = format!("flu {}", words.join(" "));
            let profile = UserProfile {
                user_id: format!("u{i}"),
                name: "Sam".into(),
                screen_name: format!("u{i}"),
                bio: String::new(),
                location_raw: String::new(),
                profile_image_ref: None,
                followers: rng.gen_range(0..5000),
                friends: rng.gen_range(0..2000),
                statuses: rng.gen_range(100..40_000),
                favourites: rng.gen_range(0..3000),
                listed: rng.gen_range(0..50),
                account_created_at: created - chrono::Duration::days(rng.gen_range(100..3000)),
                lang: "en".into(),
            };
            let record = TweetRecord {
                tweet_id: format!("t{seed}-{i}"),
                author_id: profile.user_id.clone(),
                text,
                created_at: created,
                lang: "en".into(),
                geo: None,
                topic_keywords_hit: vec![],
            };
            LabeledTweet { record, profile, label }
        })
        .collect()
}

fn train(set: &[LabeledTweet], vocab: &Vocabulary, threads: usize) -> Result<String> {
    let hp = ForestHyperparams { n_trees: 60, ..ForestHyperparams::default() };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let model = pool.install(|| train_first_person_model(set, vocab, &hp, 11))?;
    Ok(serde_json::to_string(&model)?)
}

fn classifier() -> Result<String> {
    let set = separable_set(1, 1000);
    let vocab = build_vocabulary(set.iter().map(|t| t.record.text.as_str()), &default_stopwords())?;
    let hp = ForestHyperparams { n_trees: 60, ..ForestHyperparams::default() };
    let model = train_first_person_model(&set, &vocab, &hp, 11)?;
    ensure!(model.oob.adjusted_error < 0.05, "prior-adjusted OOB error {}", model.oob.adjusted_error);

    let test = separable_set(2, 300);
    let r = evaluate_classifier(&model, &test, &vocab)?;
    let n = test.len();
    ensure!(r.tp + r.fp + r.fn_ + r.tn == n, "confusion counts sum to {}", r.tp + r.fp + r.fn_ + r.tn);
    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    for t in &test {
        let p = classify(&model, &featurize(&t.record, &t.profile, &vocab, t.record.created_at))?;
        match (t.label, p.label) {
            (Label::FirstPerson, Label::FirstPerson) => tp += 1,
            (Label::Other, Label::FirstPerson) => fp += 1,
            (Label::FirstPerson, Label::Other) => fn_ += 1,
            (Label::Other, Label::Other) => tn += 1,
        }
    }
    ensure!((tp, fp, fn_, tn) == (r.tp, r.fp, r.fn_, r.tn), "recounted confusion differs");
    let pct = |a: usize, b: usize| 100.0 * a as f64 / b as f64;
    let (precision, recall) = (pct(tp, tp + fp), pct(tp, tp + fn_));
    let f1 = 2.0 * precision * recall / (precision + recall);
    ensure!((r.accuracy - pct(tp + tn, n)).abs() < 1e-9, "accuracy {}", r.accuracy);
    ensure!((r.precision.context("precision")? - precision).abs() < 1e-9, "precision");
    ensure!((r.recall.context("recall")? - recall).abs() < 1e-9, "recall");
    ensure!((r.f1.context("f1")? - f1).abs() < 1e-9, "f1");

    let runs = [train(&set, &vocab, 1)?, train(&set, &vocab, 1)?, train(&set, &vocab, 3)?];
    ensure!(runs[0] == runs[1] && runs[1] == runs[2], "models differ between runs");
    Ok(format!(
        "vocabulary {}, OOB error {:.2}%, held-out accuracy {:.1}%, identical models across runs and thread counts",
        vocab.len(),
        100.0 * model.oob.adjusted_error,
        r.accuracy
    ))
}

// 8 and 9

fn run_in_process(dir: &Path, config: &str, seed: u64) -> Result<Vec<(String, f64, f64, bool)>> {
    let cfg = dir.join(format!("config-{seed}.json"));
    fs::write(&cfg, config)?;
    let out = dir.join(format!("out-{seed}"));
    let cli = Cli { command: Command::All, config: Some(cfg), out: out.clone(), seed: Some(seed), threads: None };
    execute(&cli, None).map_err(|e| anyhow!("seed {seed}: {e}"))?;
    let mut rows = Vec::new();
    let mut r = csv::Reader::from_path(out.join("compare/summary.csv"))?;
    for rec in r.records() {
        let rec = rec?;
        rows.push((rec[0].to_string(), rec[1].parse()?, rec[6].parse()?, rec[8].parse()?));
    }
    Ok(rows)
}

/// One-sided `P(X >= k)` for `X ~ Binomial(n, 1/2)`.
fn sign_test(k: u64, n: u64) -> f64 {
    let choose = |n: u64, r: u64| (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    (k..=n).map(|i| choose(n, i)).sum::<f64>() / 2f64.powi(n as i32)
}

fn hypothesis_direction() -> Result<String> {
    // 200 personal accounts against 1000 noise accounts.
    let config = r#"{"data": {"synth": {"nWeeks": 47, "population": {"personal": 200, "organization": 60, "topicFocused": 60, "bot": 880},
        "nLabels": 300, "nBaselineUsers": 100}}, "classifier": {"nTrees": 25},
        "cohorts": [{"name": "fp", "predicates": ["firstPersonOnly"]}, {"name": "all", "predicates": ["all"]}], "baseline": "all"}"#;
    let dir = tempfile::tempdir()?;
    let (mut wins, mut significant) = (0, 0);
    for seed in 1..=20 {
        let rows = run_in_process(dir.path(), config, seed)?;
        let fp = rows.iter().find(|r| r.0 == "fp").context("fp row")?;
        let all = rows.iter().find(|r| r.0 == "all").context("all row")?;
        wins += u64::from(fp.1 < all.1);
        significant += u64::from(fp.3 && fp.2 > 0.0);
    }
    let p = sign_test(wins, 20);
    ensure!(wins >= 16, "first-person cohort won {wins} of 20");
    ensure!(p < 0.05, "sign test p = {p}");
    ensure!(significant >= 16, "comparison significant in favour of first person in only {significant} of 20");
    Ok(format!("won {wins}/20, sign test p = {p:.2e}, significant in {significant}/20"))
}

fn subsampling() -> Result<String> {
    // Clean, dense social signal against a noisy offline series.
    let config = r#"{"data": {"synth": {"nWeeks": 47, "shape": "noisySpiky",
        "population": {"personal": 6000, "organization": 0, "topicFocused": 0, "bot": 0},
        "emission": {"personal": {"signalRate": 1.0, "noiseRate": 0.02, "chatterRate": 0.0}},
        "offlineNoise": 0.08, "nLabels": 300, "nBaselineUsers": 100}}, "classifier": {"nTrees": 10},
        "cohorts": [{"name": "full", "predicates": ["all"]}, {"name": "sub", "predicates": ["all"], "subsample": {"percent": 10, "repeats": 20}}],
        "baseline": "full"}"#;
    let dir = tempfile::tempdir()?;
    let rows = run_in_process(dir.path(), config, 3)?;
    let full = rows.iter().find(|r| r.0 == "full").context("full row")?.1;
    let subs: Vec<f64> = rows.iter().filter(|r| r.0.starts_with("sub#")).map(|r| r.1).collect();
    ensure!(subs.len() == 20, "{} subsample repeats", subs.len());
    let mean = subs.iter().sum::<f64>() / subs.len() as f64;
    let rel = mean / full - 1.0;
    ensure!(rel < 0.25, "10% mean MAPE {mean:.3} vs full {full:.3}: +{:.1}%", 100.0 * rel);
    Ok(format!("full MAPE {full:.3}, 10% mean MAPE {mean:.3} over 20 repeats ({:+.1}%)", 100.0 * rel))
}

// 10

fn files_under(root: &Path) -> Result<BTreeMap<PathBuf, Vec<u8>>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir)? {
            let p = e?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root)?.to_path_buf(), fs::read(&p)?);
            }
        }
    }
    Ok(out)
}

fn reproducibility() -> Result<String> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/demo.json");
    let dir = tempfile::tempdir()?;
    let mut trees = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = Process::new(env!("CARGO_BIN_EXE_sensecast"))
            .args(["all", "--threads", threads, "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env_remove("SENSECAST_FACE_STUB")
            .output()?;
        ensure!(o.status.success(), "--threads {threads}: {}", String::from_utf8_lossy(&o.stderr));
        trees.push(files_under(&out)?);
    }
    let csvs = |t: &BTreeMap<PathBuf, Vec<u8>>| t.keys().filter(|p| p.extension().is_some_and(|e| e == "csv")).cloned().collect::<Vec<_>>();
    let names = csvs(&trees[0]);
    ensure!(names == csvs(&trees[1]), "different CSV sets");
    ensure!(names.len() >= 10, "only {} CSV files", names.len());
    for p in &names {
        ensure!(trees[0][p] == trees[1][p], "{} differs between --threads 1 and 4", p.display());
    }
    // Everything else matches too, except the manifest which records the thread count.
    for (p, bytes) in &trees[0] {
        if p != Path::new("manifest.json") {
            ensure!(trees[1].get(p) == Some(bytes), "{} differs", p.display());
        }
    }
    Ok(format!("{} CSV files byte-identical for --threads 1 and 4", names.len()))
}
