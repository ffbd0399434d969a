//! M4 distribution CSV ingestion.

use std::collections::HashMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tsforecast::TimeSeries;

use crate::error::{BenchError, Result};

/// `(name, file stem, sp, horizon)` per sampling frequency.
pub const FREQUENCIES: [(&str, &str, usize, usize); 6] = [
    ("yearly", "Yearly", 1, 6),
    ("quarterly", "Quarterly", 4, 8),
    ("monthly", "Monthly", 12, 18),
    ("weekly", "Weekly", 1, 13),
    ("daily", "Daily", 1, 14),
    ("hourly", "Hourly", 24, 48),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub name: String,
    pub sp: usize,
    pub horizon: usize,
    pub train_path: PathBuf,
    pub test_path: PathBuf,
}

impl DatasetSpec {
    /// Spec for `name` with the M4 file layout `<Freq>-train.csv` /
    /// `<Freq>-test.csv`.
    pub fn new(name: &str, train_dir: &Path, test_dir: &Path) -> Result<Self> {
        let (name, stem, sp, horizon) = FREQUENCIES
            .iter()
            .find(|f| f.0.eq_ignore_ascii_case(name))
            .ok_or_else(|| BenchError::UnknownDataset(name.to_string()))?;
        Ok(Self {
            name: name.to_string(),
            sp: *sp,
            horizon: *horizon,
            train_path: train_dir.join(format!("{stem}-train.csv")),
            test_path: test_dir.join(format!("{stem}-test.csv")),
        })
    }

    /// `"all"` expands to every frequency.
    pub fn resolve(selector: &str, train_dir: &Path, test_dir: &Path) -> Result<Vec<Self>> {
        if selector.eq_ignore_ascii_case("all") {
            FREQUENCIES
                .iter()
                .map(|f| Self::new(f.0, train_dir, test_dir))
                .collect()
        } else {
            selector
                .split(',')
                .map(|s| Self::new(s.trim(), train_dir, test_dir))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    pub id: String,
    pub train: TimeSeries,
    pub test: TimeSeries,
}

fn read_rows(path: &Path) -> Result<Vec<(u64, String, Vec<f64>)>> {
    let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(file);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let mut fields = record.iter();
        let id = match fields.next() {
            Some(id) if !id.trim().is_empty() => id.trim().to_string(),
            _ => {
                return Err(BenchError::MalformedRow {
                    line,
                    reason: "missing series id".into(),
                })
            }
        };
        let tokens: Vec<&str> = fields.map(str::trim).collect();
        let used = tokens.iter().rposition(|t| !t.is_empty()).map_or(0, |i| i + 1);
        let values = tokens[..used]
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| BenchError::MalformedRow {
                        line,
                        reason: format!("bad value {t:?} in series {id}"),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.is_empty() {
            return Err(BenchError::MalformedRow {
                line,
                reason: format!("series {id} has no values"),
            });
        }
        rows.push((line, id, values));
    }
    Ok(rows)
}

/// Train/test pairs in training-file order. Test series start right after
/// their training series.
pub fn load_m4(train_path: &Path, test_path: &Path, spec: &DatasetSpec) -> Result<Vec<SeriesPair>> {
    let mut tests: HashMap<String, (u64, Vec<f64>)> = read_rows(test_path)?
        .into_iter()
        .map(|(line, id, values)| (id, (line, values)))
        .collect();
    read_rows(train_path)?
        .into_iter()
        .map(|(_, id, values)| {
            let (line, test) = tests
                .remove(&id)
                .ok_or_else(|| BenchError::MissingTestSeries(id.clone()))?;
            if test.len() != spec.horizon {
                return Err(BenchError::MalformedRow {
                    line,
                    reason: format!(
                        "series {id} has {} test values, expected {}",
                        test.len(),
                        spec.horizon
                    ),
                });
            }
            let n = values.len() as i64;
            Ok(SeriesPair {
                train: TimeSeries::seasonal(values, spec.sp)?,
                test: TimeSeries::with_start(test, n, spec.sp)?,
                id,
            })
        })
        .collect()
}

pub fn load_dataset(spec: &DatasetSpec) -> Result<Vec<SeriesPair>> {
    load_m4(&spec.train_path, &spec.test_path, spec)
}
