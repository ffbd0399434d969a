//! Significance reports over a results file.

use std::fmt::Write as _;

use serde::Serialize;
use tsforecast::eval::{
    friedman_test, holm_adjust, paired_t_test, rank_models, score_table, wilcoxon_signed_rank,
    CriticalDifference, EvalRecord, Metric, RankMatrix,
};

use crate::error::{BenchError, Result};
use crate::num;
use crate::runner::SeriesResult;

pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatTest {
    Friedman,
    Nemenyi,
    WilcoxonHolm,
    TTest,
}

impl StatTest {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "friedman" => Some(Self::Friedman),
            "nemenyi" => Some(Self::Nemenyi),
            "wilcoxon_holm" => Some(Self::WilcoxonHolm),
            "ttest" => Some(Self::TTest),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Friedman => "friedman",
            Self::Nemenyi => "nemenyi",
            Self::WilcoxonHolm => "wilcoxon_holm",
            Self::TTest => "ttest",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RankEntry {
    pub model: String,
    #[serde(serialize_with = "num::serialize_f64")]
    pub mean_rank: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FriedmanOut {
    #[serde(serialize_with = "num::serialize_f64")]
    pub chi2: f64,
    pub df: usize,
    #[serde(serialize_with = "num::serialize_f64")]
    pub p: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CdOut {
    #[serde(serialize_with = "num::serialize_f64")]
    pub alpha: f64,
    pub n_series: usize,
    #[serde(serialize_with = "num::serialize_f64")]
    pub cd: f64,
    pub models: Vec<String>,
    #[serde(serialize_with = "num::serialize_vec_f64")]
    pub mean_ranks: Vec<f64>,
    pub groups: Vec<Vec<String>>,
}

impl From<&CriticalDifference> for CdOut {
    fn from(c: &CriticalDifference) -> Self {
        Self {
            alpha: c.alpha,
            n_series: c.n_series,
            cd: c.cd,
            models: c.models.clone(),
            mean_ranks: c.mean_ranks.clone(),
            groups: c.groups.clone(),
        }
    }
}

/// One row of a pairwise comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct PairOut {
    pub model_a: String,
    pub model_b: String,
    /// Signed-rank `W` or the t statistic, depending on the test.
    #[serde(serialize_with = "num::serialize_f64")]
    pub statistic: f64,
    #[serde(serialize_with = "num::serialize_f64")]
    pub p: f64,
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub p_holm: Option<f64>,
    pub significant: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub test: &'static str,
    pub metric: &'static str,
    pub n_series: usize,
    /// Ascending mean rank.
    pub mean_ranks: Vec<RankEntry>,
    pub friedman: Option<FriedmanOut>,
    pub critical_difference: Option<CdOut>,
    pub pairs: Vec<PairOut>,
    #[serde(skip)]
    pub cd: Option<CriticalDifference>,
}

fn complete_records(results: &[SeriesResult]) -> Result<Vec<EvalRecord>> {
    results
        .iter()
        .map(|r| {
            r.to_eval().ok_or_else(|| {
                BenchError::IncompleteGrid(format!(
                    "{} failed on {}: {}",
                    r.model,
                    r.series_id,
                    r.error.as_deref().unwrap_or("missing metrics")
                ))
            })
        })
        .collect()
}

fn grid_error(e: tsforecast::Error) -> BenchError {
    match e {
        tsforecast::Error::IncompleteGrid(m) => BenchError::IncompleteGrid(m),
        other => BenchError::Forecast(other),
    }
}

fn sorted_ranks(ranks: &RankMatrix) -> Vec<RankEntry> {
    let r = tsforecast::eval::mean_ranks(ranks);
    let mut out: Vec<RankEntry> = ranks
        .models
        .iter()
        .zip(r)
        .map(|(m, mean_rank)| RankEntry {
            model: m.clone(),
            mean_rank,
        })
        .collect();
    out.sort_by(|a, b| a.mean_rank.total_cmp(&b.mean_rank).then(a.model.cmp(&b.model)));
    out
}

pub fn stats(results: &[SeriesResult], test: StatTest, metric: Metric) -> Result<StatsReport> {
    let records = complete_records(results)?;
    let ranks = rank_models(&records, metric).map_err(grid_error)?;
    let mean_ranks = sorted_ranks(&ranks);
    let mut report = StatsReport {
        test: test.as_str(),
        metric: match metric {
            Metric::Smape => "smape",
            Metric::Mase => "mase",
        },
        n_series: ranks.series.len(),
        mean_ranks,
        friedman: None,
        critical_difference: None,
        pairs: Vec::new(),
        cd: None,
    };
    match test {
        StatTest::Friedman | StatTest::Nemenyi => {
            let (chi2, p) = friedman_test(&ranks)?;
            report.friedman = Some(FriedmanOut {
                chi2,
                df: ranks.models.len() - 1,
                p,
            });
            if test == StatTest::Nemenyi {
                let cd = CriticalDifference::from_ranks(&ranks, ALPHA)?;
                report.critical_difference = Some(CdOut::from(&cd));
                report.cd = Some(cd);
            }
        }
        StatTest::WilcoxonHolm | StatTest::TTest => {
            report.pairs = pairwise(&records, metric, &report.mean_ranks, test)?;
        }
    }
    Ok(report)
}

fn pairwise(records: &[EvalRecord], metric: Metric, order: &[RankEntry], test: StatTest) -> Result<Vec<PairOut>> {
    let (models, _, table) = score_table(records, metric).map_err(grid_error)?;
    let column = |name: &str| -> Vec<f64> {
        let j = models.iter().position(|m| m == name).expect("model in table");
        table.iter().map(|row| row[j]).collect()
    };
    let mut pairs = Vec::new();
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let (a, b) = (&order[i].model, &order[j].model);
            let (x, y) = (column(a), column(b));
            let outcome = match test {
                StatTest::WilcoxonHolm => wilcoxon_signed_rank(&x, &y).map(|r| (r.w, r.p)),
                _ => paired_t_test(&x, &y),
            };
            pairs.push(match outcome {
                Ok((statistic, p)) => PairOut {
                    model_a: a.clone(),
                    model_b: b.clone(),
                    statistic,
                    p,
                    p_holm: None,
                    significant: false,
                    error: None,
                },
                // Identical columns: no evidence of a difference.
                Err(e) => PairOut {
                    model_a: a.clone(),
                    model_b: b.clone(),
                    statistic: f64::NAN,
                    p: 1.0,
                    p_holm: None,
                    significant: false,
                    error: Some(e.to_string()),
                },
            });
        }
    }
    if test == StatTest::WilcoxonHolm && !pairs.is_empty() {
        let raw: Vec<f64> = pairs.iter().map(|p| p.p).collect();
        for (pair, adj) in pairs.iter_mut().zip(holm_adjust(&raw)?) {
            pair.p_holm = Some(adj);
            pair.significant = adj < ALPHA;
        }
    } else {
        for pair in &mut pairs {
            pair.significant = pair.p < ALPHA;
        }
    }
    Ok(pairs)
}

pub fn to_json(report: &StatsReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

/// Critical-difference diagram: rank axis, one labelled marker per model
/// and a bar under each group of models whose ranks differ by less than CD.
pub fn render_cd_svg(cd: &CriticalDifference) -> String {
    let k = cd.models.len().max(2);
    let (width, left, right) = (720.0, 120.0, 600.0);
    let scale = |r: f64| left + (r - 1.0) / (k as f64 - 1.0) * (right - left);
    let half = cd.models.len().div_ceil(2);
    let label_rows = half.max(cd.models.len() - half);
    let height = 110.0 + 22.0 * (label_rows + cd.groups.len()) as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let axis_y = 50.0;
    let _ = writeln!(s, r#"<line x1="{left}" y1="{axis_y}" x2="{right}" y2="{axis_y}" stroke="black"/>"#);
    for r in 1..=k {
        let x = scale(r as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{axis_y}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{r}</text>"#,
            axis_y - 6.0,
            axis_y - 10.0
        );
    }
    let cd_x = left + cd.cd / (k as f64 - 1.0) * (right - left);
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="18" x2="{cd_x:.2}" y2="18" stroke="black" stroke-width="2"/><text x="{left}" y="12">CD = {:.3}</text>"#,
        cd.cd
    );
    let groups_top = axis_y + 12.0;
    for (g, members) in cd.groups.iter().enumerate() {
        let ranks: Vec<f64> = members
            .iter()
            .filter_map(|m| cd.models.iter().position(|x| x == m).map(|i| cd.mean_ranks[i]))
            .collect();
        let lo = ranks.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ranks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let y = groups_top + 8.0 * g as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y}" x2="{:.2}" y2="{y}" stroke="black" stroke-width="3"/>"#,
            scale(lo) - 3.0,
            scale(hi) + 3.0
        );
    }
    let labels_top = groups_top + 8.0 * cd.groups.len() as f64 + 16.0;
    for (i, (model, rank)) in cd.models.iter().zip(&cd.mean_ranks).enumerate() {
        let x = scale(*rank);
        let (row, on_left) = if i < half { (i, true) } else { (cd.models.len() - 1 - i, false) };
        let y = labels_top + 22.0 * row as f64;
        let (tx, anchor) = if on_left { (left - 10.0, "end") } else { (right + 10.0, "start") };
        let _ = writeln!(
            s,
            r#"<polyline points="{x:.2},{axis_y} {x:.2},{y} {tx},{y}" fill="none" stroke="black"/><text x="{tx}" y="{}" text-anchor="{anchor}">{} ({:.3})</text>"#,
            y + 4.0,
            xml_escape(model),
            rank
        );
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Table of the pairwise results, one line per pair.
pub fn render_pairs(report: &StatsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<32}{:>14}{:>14}{:>14}  significant", "pair", "statistic", "p", "p_holm");
    for p in &report.pairs {
        let _ = writeln!(
            out,
            "{:<32}{:>14.4}{:>14.6}{:>14}  {}",
            format!("{} vs {}", p.model_a, p.model_b),
            p.statistic,
            p.p,
            p.p_holm.map_or("-".to_string(), |v| format!("{v:.6}")),
            p.significant
        );
    }
    out
}
