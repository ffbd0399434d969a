use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::metrics::EvalRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Smape,
    Mase,
}

impl Metric {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "smape" => Some(Self::Smape),
            "mase" => Some(Self::Mase),
            _ => None,
        }
    }

    pub fn of(self, r: &EvalRecord) -> f64 {
        match self {
            Self::Smape => r.smape,
            Self::Mase => r.mase,
        }
    }
}

/// Per-series ranks of models; `ranks[i][j]` ranks model `j` on series `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankMatrix {
    pub models: Vec<String>,
    pub series: Vec<String>,
    pub ranks: Vec<Vec<f64>>,
}

/// Ascending ranks starting at 1, tied values sharing their average rank.
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
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Raw score table `(models, series, scores[series][model])`, both axes
/// sorted by name. Every model must score every series exactly once.
pub fn score_table(records: &[EvalRecord], metric: Metric) -> Result<(Vec<String>, Vec<String>, Vec<Vec<f64>>)> {
    let mut cells: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut models = BTreeMap::new();
    let mut series = BTreeMap::new();
    for r in records {
        models.insert(r.model.as_str(), ());
        series.insert(r.series_id.as_str(), ());
        let v = metric.of(r);
        if !v.is_finite() {
            return Err(Error::IncompleteGrid(format!(
                "non-finite score for {} on {}",
                r.model, r.series_id
            )));
        }
        if cells.insert((r.series_id.as_str(), r.model.as_str()), v).is_some() {
            return Err(Error::IncompleteGrid(format!(
                "duplicate record for {} on {}",
                r.model, r.series_id
            )));
        }
    }
    let models: Vec<&str> = models.into_keys().collect();
    let series: Vec<&str> = series.into_keys().collect();
    let mut table = Vec::with_capacity(series.len());
    for s in &series {
        let mut row = Vec::with_capacity(models.len());
        for m in &models {
            let v = cells
                .get(&(*s, *m))
                .ok_or_else(|| Error::IncompleteGrid(format!("{m} missing on {s}")))?;
            row.push(*v);
        }
        table.push(row);
    }
    Ok((
        models.into_iter().map(String::from).collect(),
        series.into_iter().map(String::from).collect(),
        table,
    ))
}

/// Rank models per series, lower metric first.
pub fn rank_models(records: &[EvalRecord], metric: Metric) -> Result<RankMatrix> {
    let (models, series, table) = score_table(records, metric)?;
    if models.is_empty() {
        return Err(Error::IncompleteGrid("no records".into()));
    }
    Ok(RankMatrix {
        models,
        series,
        ranks: table.iter().map(|row| average_ranks(row)).collect(),
    })
}

/// Mean rank of each model, in `RankMatrix::models` order.
pub fn mean_ranks(ranks: &RankMatrix) -> Vec<f64> {
    let n = ranks.ranks.len() as f64;
    (0..ranks.models.len())
        .map(|j| ranks.ranks.iter().map(|row| row[j]).sum::<f64>() / n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, model: &str, smape: f64) -> EvalRecord {
        EvalRecord {
            series_id: id.into(),
            model: model.into(),
            dataset: "d".into(),
            smape,
            mase: smape,
            runtime_s: 0.0,
        }
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(average_ranks(&[1.0, 1.0, 3.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(average_ranks(&[3.0, 1.0, 1.0, 1.0]), vec![4.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn opposite_orderings_average_out() {
        let r = vec![rec("s1", "A", 1.0), rec("s1", "B", 2.0), rec("s2", "A", 2.0), rec("s2", "B", 1.0)];
        let m = rank_models(&r, Metric::Smape).unwrap();
        assert_eq!(mean_ranks(&m), vec![1.5, 1.5]);
    }

    #[test]
    fn missing_cell() {
        let r = vec![rec("s1", "A", 1.0), rec("s1", "B", 2.0), rec("s2", "A", 2.0)];
        assert!(matches!(rank_models(&r, Metric::Smape), Err(Error::IncompleteGrid(_))));
    }
}
