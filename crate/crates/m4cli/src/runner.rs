//! Parallel evaluation of models over M4 series.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tsforecast::eval::{mase, mean_ranks, owa, rank_models, smape, EvalRecord, MaseDenominator, Metric};
use tsforecast::{Forecaster, ForecastingHorizon};

use crate::data::{load_dataset, DatasetSpec, SeriesPair};
use crate::error::{BenchError, Result};
use crate::num;
use crate::registry::{RecipeConfig, Registry};

pub const REFERENCE_MODEL: &str = "Naive2";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub datasets: Vec<DatasetSpec>,
    pub models: Vec<String>,
    pub jobs: usize,
    /// Reserved; every recipe is deterministic.
    pub seed: u64,
    pub mase_denominator: MaseDenominator,
    pub recipe: RecipeConfig,
    pub out: PathBuf,
}

impl RunManifest {
    /// Requested models with Naive2 appended when missing, duplicates
    /// removed, order kept.
    pub fn effective_models(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out: Vec<String> = self
            .models
            .iter()
            .filter(|m| seen.insert(m.as_str()))
            .cloned()
            .collect();
        if !seen.contains(REFERENCE_MODEL) {
            out.push(REFERENCE_MODEL.to_string());
        }
        out
    }
}

/// One `(model, series)` outcome. Metrics are absent when the model failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub series_id: String,
    pub model: String,
    pub dataset: String,
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub smape: Option<f64>,
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub mase: Option<f64>,
    #[serde(serialize_with = "num::serialize_f64")]
    pub runtime_s: f64,
    pub error: Option<String>,
}

impl SeriesResult {
    pub fn to_eval(&self) -> Option<EvalRecord> {
        match (self.smape, self.mase, &self.error) {
            (Some(smape), Some(mase), None) => Some(EvalRecord {
                series_id: self.series_id.clone(),
                model: self.model.clone(),
                dataset: self.dataset.clone(),
                smape,
                mase,
                runtime_s: self.runtime_s,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub dataset: String,
    pub model: String,
    pub n_series: usize,
    pub n_failed: usize,
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub smape: Option<f64>,
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub mase: Option<f64>,
    /// Over series where both this model and Naive2 succeeded.
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub owa: Option<f64>,
    /// Mean sMAPE rank over series where every model succeeded.
    #[serde(serialize_with = "num::serialize_opt_f64")]
    pub mean_rank_smape: Option<f64>,
    #[serde(serialize_with = "num::serialize_f64")]
    pub runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub manifest: RunManifest,
    pub summaries: Vec<ModelSummary>,
    #[serde(serialize_with = "num::serialize_f64")]
    pub total_runtime_s: f64,
}

#[derive(Serialize, Deserialize)]
struct AggregateLine {
    aggregate: Aggregate,
}

/// Fits `model` on the training part and scores the forecast of the test
/// part. Any failure is reported in the result, never propagated.
pub fn evaluate_series(
    model: &dyn Forecaster,
    name: &str,
    dataset: &str,
    pair: &SeriesPair,
    mase_denominator: MaseDenominator,
) -> SeriesResult {
    let started = Instant::now();
    let outcome = (|| -> tsforecast::Result<(f64, f64)> {
        let mut f = model.clone_box();
        f.fit(&pair.train, None)?;
        let fh = ForecastingHorizon::ahead(pair.test.len())?;
        let pred = f.predict(&fh)?;
        if pred.values.iter().any(|v| !v.is_finite()) {
            return Err(tsforecast::Error::NonFiniteForecast);
        }
        let truth = pair.test.values();
        let s = smape(truth, &pred.values)?;
        let m = mase(truth, &pred.values, pair.train.values(), pair.train.sp(), mase_denominator)?;
        Ok((s, m))
    })();
    let runtime_s = started.elapsed().as_secs_f64();
    let (smape, mase, error) = match outcome {
        Ok((s, m)) => (Some(s), Some(m), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    SeriesResult {
        series_id: pair.id.clone(),
        model: name.to_string(),
        dataset: dataset.to_string(),
        smape,
        mase,
        runtime_s,
        error,
    }
}

/// Evaluates every model on every series of one dataset with `jobs` worker
/// threads. Results are ordered by `(model, series_id)` whatever the job
/// count.
pub fn run_dataset(
    registry: &Registry,
    spec: &DatasetSpec,
    series: &[SeriesPair],
    models: &[String],
    jobs: usize,
    mase_denominator: MaseDenominator,
) -> Result<Vec<SeriesResult>> {
    let built = models
        .iter()
        .map(|m| Ok((m.clone(), registry.build(m, spec.sp, spec.horizon)?)))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, usize)> = (0..built.len())
        .flat_map(|m| (0..series.len()).map(move |s| (m, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let mut results: Vec<SeriesResult> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(m, s)| {
                let (name, model) = &built[m];
                evaluate_series(model.as_ref(), name, &spec.name, &series[s], mase_denominator)
            })
            .collect()
    });
    results.sort_by(|a, b| (&a.model, &a.series_id).cmp(&(&b.model, &b.series_id)));
    Ok(results)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Per-(dataset, model) summaries; a `"total"` block over every series is
/// added when more than one dataset is present.
pub fn summarize(results: &[SeriesResult]) -> Vec<ModelSummary> {
    let mut by_dataset: BTreeMap<&str, Vec<&SeriesResult>> = BTreeMap::new();
    for r in results {
        by_dataset.entry(r.dataset.as_str()).or_default().push(r);
    }
    let mut out = Vec::new();
    for (dataset, rows) in &by_dataset {
        out.extend(summarize_block(dataset, rows));
    }
    if by_dataset.len() > 1 {
        let rows: Vec<&SeriesResult> = results.iter().collect();
        out.extend(summarize_block("total", &rows));
    }
    out
}

fn summarize_block(dataset: &str, rows: &[&SeriesResult]) -> Vec<ModelSummary> {
    let mut by_model: BTreeMap<&str, Vec<&SeriesResult>> = BTreeMap::new();
    for r in rows {
        by_model.entry(r.model.as_str()).or_default().push(r);
    }
    // Series keys include the dataset so totals never mix up ids.
    let key = |r: &EvalRecord| format!("{}/{}", r.dataset, r.series_id);
    let evals: BTreeMap<&str, Vec<EvalRecord>> = by_model
        .iter()
        .map(|(m, rs)| (*m, rs.iter().filter_map(|r| r.to_eval()).collect()))
        .collect();
    let reference: BTreeMap<String, &EvalRecord> = evals
        .get(REFERENCE_MODEL)
        .map(|v| v.iter().map(|r| (key(r), r)).collect())
        .unwrap_or_default();

    let complete: BTreeSet<String> = {
        let mut sets = evals.values().map(|v| v.iter().map(key).collect::<BTreeSet<_>>());
        let first = sets.next().unwrap_or_default();
        sets.fold(first, |acc, s| acc.intersection(&s).cloned().collect())
    };
    let ranks: BTreeMap<String, f64> = {
        let rows: Vec<EvalRecord> = evals
            .values()
            .flatten()
            .filter(|r| complete.contains(&key(r)))
            .map(|r| EvalRecord {
                series_id: key(r),
                ..r.clone()
            })
            .collect();
        match rank_models(&rows, Metric::Smape) {
            Ok(m) => m.models.iter().cloned().zip(mean_ranks(&m)).collect(),
            Err(_) => BTreeMap::new(),
        }
    };

    by_model
        .iter()
        .map(|(model, rs)| {
            let ok = &evals[model];
            let paired: Vec<EvalRecord> = ok.iter().filter(|r| reference.contains_key(&key(r))).cloned().collect();
            let base: Vec<EvalRecord> = paired.iter().map(|r| reference[&key(r)].clone()).collect();
            let relabel = |v: &[EvalRecord]| -> Vec<EvalRecord> {
                v.iter()
                    .map(|r| EvalRecord {
                        series_id: key(r),
                        ..r.clone()
                    })
                    .collect()
            };
            ModelSummary {
                dataset: dataset.to_string(),
                model: model.to_string(),
                n_series: rs.len(),
                n_failed: rs.len() - ok.len(),
                smape: mean(ok.iter().map(|r| r.smape)),
                mase: mean(ok.iter().map(|r| r.mase)),
                owa: owa(&relabel(&paired), &relabel(&base)).ok(),
                mean_rank_smape: ranks.get(*model).copied(),
                runtime_s: rs.iter().map(|r| r.runtime_s).sum(),
            }
        })
        .collect()
}

/// Runs the manifest and writes one JSON line per result followed by an
/// aggregate line. Only I/O and setup problems are errors.
pub fn run(manifest: &RunManifest, registry: &Registry) -> Result<Aggregate> {
    let started = Instant::now();
    let models = manifest.effective_models();
    for m in &models {
        registry.build(m, 1, 1)?;
    }
    let mut results = Vec::new();
    for spec in &manifest.datasets {
        let series = load_dataset(spec)?;
        results.extend(run_dataset(
            registry,
            spec,
            &series,
            &models,
            manifest.jobs,
            manifest.mase_denominator,
        )?);
    }
    let aggregate = Aggregate {
        manifest: manifest.clone(),
        summaries: summarize(&results),
        total_runtime_s: started.elapsed().as_secs_f64(),
    };
    write_results(&manifest.out, &results, &aggregate)?;
    Ok(aggregate)
}

pub fn write_results(path: &Path, results: &[SeriesResult], aggregate: &Aggregate) -> Result<()> {
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| BenchError::io(path, e);
    for r in results {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n").map_err(io)?;
    }
    serde_json::to_writer(
        &mut w,
        &AggregateLine {
            aggregate: aggregate.clone(),
        },
    )?;
    w.write_all(b"\n").map_err(io)?;
    w.flush().map_err(io)
}

/// Reads a results file back: per-series results and the aggregate block
/// when present.
pub fn read_results(path: &Path) -> Result<(Vec<SeriesResult>, Option<Aggregate>)> {
    let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut results = Vec::new();
    let mut aggregate = None;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| BenchError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with("{\"aggregate\"") {
            aggregate = Some(serde_json::from_str::<AggregateLine>(&line)?.aggregate);
        } else {
            results.push(serde_json::from_str(&line)?);
        }
    }
    Ok((results, aggregate))
}
