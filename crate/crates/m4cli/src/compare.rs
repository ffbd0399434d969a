//! Replicated vs published accuracy.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::path::Path;

use serde::Deserialize;

use crate::error::{BenchError, Result};
use crate::num::sig17;
use crate::runner::{summarize, SeriesResult};

/// Reference values shipped with the crate.
pub const PUBLISHED_CSV: &str = include_str!("../data/published.csv");

pub type Key = (String, String, String);

#[derive(Debug, Deserialize)]
struct Row {
    model: String,
    dataset: String,
    metric: String,
    value: f64,
}

/// `(model, dataset, metric) -> value` from a CSV with `#` comments.
pub fn parse_published(text: &str) -> Result<BTreeMap<Key, f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for row in reader.deserialize() {
        let row: Row = row?;
        out.insert((row.model, row.dataset, row.metric), row.value);
    }
    Ok(out)
}

pub fn read_published(path: &Path) -> Result<BTreeMap<Key, f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_published(&text)
}

pub fn diff_pct(replicated: f64, published: f64) -> f64 {
    100.0 * (replicated - published) / published
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub model: String,
    pub dataset: String,
    pub metric: String,
    pub replicated: f64,
    pub published: f64,
    pub diff_pct: f64,
}

/// Compares every available (model, dataset) mean sMAPE, MASE and OWA with
/// its reference. Values are rounded to the published three decimals before
/// differencing so an exact replication reads as 0.000.
pub fn compare(results: &[SeriesResult], published: &BTreeMap<Key, f64>) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for s in summarize(results) {
        for (metric, value) in [("smape", s.smape), ("mase", s.mase), ("owa", s.owa)] {
            let Some(replicated) = value else { continue };
            let key = (s.model.clone(), s.dataset.clone(), metric.to_string());
            let published = *published.get(&key).ok_or_else(|| BenchError::MissingReference {
                model: key.0.clone(),
                dataset: key.1.clone(),
                metric: key.2.clone(),
            })?;
            let rounded = (replicated * 1000.0).round() / 1000.0;
            out.push(Comparison {
                model: key.0,
                dataset: key.1,
                metric: key.2,
                replicated,
                published,
                diff_pct: diff_pct(rounded, published),
            });
        }
    }
    Ok(out)
}

pub fn write_csv(path: &Path, rows: &[Comparison]) -> Result<()> {
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["model", "dataset", "metric", "replicated", "published", "diff_pct"])?;
    for r in rows {
        w.write_record([
            r.model.clone(),
            r.dataset.clone(),
            r.metric.clone(),
            sig17(r.replicated),
            sig17(r.published),
            sig17(r.diff_pct),
        ])?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))
}

/// Aligned table, one row per (model, metric), datasets as columns.
pub fn render_text(rows: &[Comparison]) -> String {
    let mut datasets: Vec<&str> = Vec::new();
    for r in rows {
        if !datasets.contains(&r.dataset.as_str()) {
            datasets.push(&r.dataset);
        }
    }
    let mut cells: BTreeMap<(&str, &str), BTreeMap<&str, f64>> = BTreeMap::new();
    for r in rows {
        cells
            .entry((&r.metric, &r.model))
            .or_default()
            .insert(&r.dataset, r.diff_pct);
    }
    let mut out = String::new();
    let _ = write!(out, "{:<8}{:<18}", "metric", "model");
    for d in &datasets {
        let _ = write!(out, "{d:>12}");
    }
    out.push('\n');
    for ((metric, model), row) in &cells {
        let _ = write!(out, "{metric:<8}{model:<18}");
        for d in &datasets {
            match row.get(d) {
                Some(v) => {
                    let _ = write!(out, "{v:>12.3}");
                }
                None => {
                    let _ = write!(out, "{:>12}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}
