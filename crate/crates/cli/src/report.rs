//! MAPE box plots as self-contained SVG.
//!
//! Quartiles use linear interpolation between order statistics (the
//! `(n-1)p` convention). Whiskers span the smallest and largest APE.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;

use anyhow::{bail, Context as _, Result};

use crate::stages::{Context, Stage, CASES, REPORT_SUMMARY, REPORT_SVG, SUMMARY};
use sensecast::backtest::{quantile, read_cases_csv};

/// Five-number summary plus mean of one cohort's APEs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub cohort: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub n: usize,
}

impl BoxStats {
    pub fn from_apes(cohort: &str, apes: &[f64]) -> Option<Self> {
        if apes.is_empty() {
            return None;
        }
        let mut s = apes.to_vec();
        s.sort_by(f64::total_cmp);
        Some(BoxStats {
            cohort: cohort.to_string(),
            min: s[0],
            q1: quantile(&s, 0.25),
            median: quantile(&s, 0.5),
            q3: quantile(&s, 0.75),
            max: s[s.len() - 1],
            mean: s.iter().sum::<f64>() / s.len() as f64,
            n: s.len(),
        })
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const SLOT: f64 = 110.0;
const TOP: f64 = 40.0;
const PLOT_H: f64 = 300.0;
const LEFT: f64 = 60.0;

pub fn render_boxplot(boxes: &[BoxStats], title: &str) -> String {
    let width = LEFT + SLOT * boxes.len() as f64 + 20.0;
    let height = TOP + PLOT_H + 60.0;
    let top_value = boxes.iter().map(|b| b.max).fold(0.0_f64, f64::max);
    let top_value = if top_value > 0.0 { top_value * 1.05 } else { 1.0 };
    let y = |v: f64| TOP + PLOT_H * (1.0 - v / top_value);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#);
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, width / 2.0, escape(title));
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#, TOP + PLOT_H);
    for i in 0..=4 {
        let v = top_value * f64::from(i) / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.1}</text>"#,
            LEFT - 5.0,
            y(v) + 3.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.1}" transform="rotate(-90 15 {:.1})" text-anchor="middle" font-family="sans-serif" font-size="11">APE (%)</text>"#,
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0
    );
    for (i, b) in boxes.iter().enumerate() {
        let cx = LEFT + SLOT * (i as f64 + 0.5);
        let (x0, x1) = (cx - 30.0, cx + 30.0);
        let _ = writeln!(
            s,
            r#"<g class="cohort" data-cohort="{}" data-n="{}" data-min="{}" data-q1="{}" data-median="{}" data-q3="{}" data-max="{}" data-mean="{}">"#,
            escape(&b.cohort),
            b.n,
            b.min,
            b.q1,
            b.median,
            b.q3,
            b.max,
            b.mean
        );
        let _ = writeln!(s, r#"  <line class="whisker" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#, y(b.max), y(b.q3));
        let _ = writeln!(s, r#"  <line class="whisker" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#, y(b.q1), y(b.min));
        let _ = writeln!(
            s,
            r##"  <rect class="box" x="{x0:.2}" y="{:.2}" width="60" height="{:.2}" fill="#cfe2f3" stroke="black"/>"##,
            y(b.q3),
            (y(b.q1) - y(b.q3)).max(0.0)
        );
        let _ = writeln!(s, r#"  <line class="median" x1="{x0:.2}" y1="{0:.2}" x2="{x1:.2}" y2="{0:.2}" stroke="black" stroke-width="2"/>"#, y(b.median));
        let _ = writeln!(s, r#"  <circle class="mean" cx="{cx:.2}" cy="{:.2}" r="3.5" fill="black"/>"#, y(b.mean));
        let _ = writeln!(
            s,
            r#"  <text x="{cx:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            TOP + PLOT_H + 18.0,
            escape(&b.cohort)
        );
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

pub(crate) fn run(ctx: &Context) -> Result<()> {
    let cases_path = ctx.cached(CASES, Stage::Backtest)?;
    let summary_path = ctx.cached(SUMMARY, Stage::Compare)?;
    let rows = read_cases_csv(File::open(&cases_path).with_context(|| format!("opening {}", cases_path.display()))?)?;
    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for row in rows {
        if groups.last().is_none_or(|g| g.0 != row.cohort) {
            groups.push((row.cohort.clone(), Vec::new()));
        }
        if let Some(ape) = row.ape {
            groups.last_mut().expect("just pushed").1.push(ape);
        }
    }
    if groups.is_empty() {
        bail!("no cohorts to report");
    }
    let boxes: Vec<BoxStats> = groups
        .iter()
        .map(|(name, apes)| BoxStats::from_apes(name, apes).with_context(|| format!("cohort {name} has no successful cases")))
        .collect::<Result<_>>()?;
    let mut w = crate::stages::create(&ctx.output(REPORT_SVG)?)?;
    w.write_all(render_boxplot(&boxes, "MAPE by cohort").as_bytes())?;
    w.flush()?;
    std::fs::copy(&summary_path, ctx.output(REPORT_SUMMARY)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_of_one_to_five() {
        let b = BoxStats::from_apes("a", &[5.0, 1.0, 4.0, 2.0, 3.0]).unwrap();
        assert_eq!((b.q1, b.median, b.q3, b.mean), (2.0, 3.0, 4.0, 3.0));
        let svg = render_boxplot(&[b], "t");
        assert!(svg.contains(r#"data-q1="2" data-median="3" data-q3="4""#));
        assert!(svg.contains(r#"data-mean="3""#));
    }

    #[test]
    fn one_group_per_cohort_with_escaped_labels() {
        let a = BoxStats::from_apes("fp", &[1.0, 2.0]).unwrap();
        let b = BoxStats::from_apes("a<b", &[3.0]).unwrap();
        let svg = render_boxplot(&[a, b], "t");
        assert_eq!(svg.matches(r#"<g class="cohort""#).count(), 2);
        assert!(svg.contains("data-cohort=\"a&lt;b\""));
        assert!(!svg.contains("a<b"));
    }

    #[test]
    fn empty_apes_have_no_box() {
        assert!(BoxStats::from_apes("x", &[]).is_none());
    }
}
