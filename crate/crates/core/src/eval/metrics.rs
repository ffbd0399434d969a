use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-series evaluation of one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub series_id: String,
    pub model: String,
    pub dataset: String,
    pub smape: f64,
    pub mase: f64,
    pub runtime_s: f64,
}

/// Which stretch of data scales MASE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaseDenominator {
    /// Seasonal differences over the concatenation of training and test data.
    #[default]
    AsFormula,
    /// Seasonal differences over the training data only (M4 practice).
    TrainOnly,
}

impl MaseDenominator {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "as_formula" => Some(Self::AsFormula),
            "train_only" => Some(Self::TrainOnly),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AsFormula => "as_formula",
            Self::TrainOnly => "train_only",
        }
    }
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }
    Ok(())
}

/// Symmetric MAPE in percent, in `[0, 200]`. A term with `|y| + |ŷ| = 0`
/// contributes 0.
pub fn smape(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred)?;
    let sum: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(|(y, f)| {
            let denom = y.abs() + f.abs();
            if denom == 0.0 {
                0.0
            } else {
                (y - f).abs() / denom
            }
        })
        .sum();
    Ok(200.0 * sum / y_true.len() as f64)
}

/// Mean absolute error, usable as a tuning score.
pub fn mae(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_lengths(y_true, y_pred)?;
    let sum: f64 = y_true.iter().zip(y_pred).map(|(y, f)| (y - f).abs()).sum();
    Ok(sum / y_true.len() as f64)
}

/// Mean absolute scaled error with seasonal-naive scaling at lag `m`.
pub fn mase(
    y_true: &[f64],
    y_pred: &[f64],
    y_train: &[f64],
    m: usize,
    denominator: MaseDenominator,
) -> Result<f64> {
    check_lengths(y_true, y_pred)?;
    let m = m.max(1);
    let scale_data: Vec<f64> = match denominator {
        MaseDenominator::AsFormula => y_train.iter().chain(y_true).copied().collect(),
        MaseDenominator::TrainOnly => y_train.to_vec(),
    };
    if scale_data.len() <= m {
        return Err(Error::SeriesTooShort {
            needed: m + 1,
            got: scale_data.len(),
        });
    }
    let diffs = scale_data.len() - m;
    let scale = scale_data
        .windows(m + 1)
        .map(|w| (w[m] - w[0]).abs())
        .sum::<f64>()
        / diffs as f64;
    if scale == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(mae(y_true, y_pred)? / scale)
}

fn by_series(records: &[EvalRecord]) -> Result<BTreeMap<&str, &EvalRecord>> {
    let mut out = BTreeMap::new();
    for r in records {
        if out.insert(r.series_id.as_str(), r).is_some() {
            return Err(Error::SeriesMismatch(format!(
                "series {} appears twice",
                r.series_id
            )));
        }
    }
    Ok(out)
}

/// Overall weighted average relative to Naïve2: the mean of the sMAPE ratio
/// and the MASE ratio, each taken between mean errors.
pub fn owa(records: &[EvalRecord], naive2: &[EvalRecord]) -> Result<f64> {
    let a = by_series(records)?;
    let b = by_series(naive2)?;
    if a.is_empty() {
        return Err(Error::SeriesMismatch("no records".into()));
    }
    if a.len() != b.len() || a.keys().zip(b.keys()).any(|(x, y)| x != y) {
        return Err(Error::SeriesMismatch(
            "model and Naive2 cover different series".into(),
        ));
    }
    let n = a.len() as f64;
    let mean = |m: &BTreeMap<&str, &EvalRecord>, f: fn(&EvalRecord) -> f64| {
        m.values().map(|r| f(r)).sum::<f64>() / n
    };
    let smape_ratio = mean(&a, |r| r.smape) / mean(&b, |r| r.smape);
    let mase_ratio = mean(&a, |r| r.mase) / mean(&b, |r| r.mase);
    Ok(0.5 * (smape_ratio + mase_ratio))
}
