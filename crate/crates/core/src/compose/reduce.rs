use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecaster::{extend_training, Forecaster};
use crate::params::{invalid, nest, take_nested, Params};
use crate::regress::{LinearRegression, Regressor};
use crate::series::{ForecastingHorizon, TimeSeries};

/// Sliding windows of a series stacked into a regression table. Row `i`
/// holds `y[i..i + w]` (oldest to newest) and its target is `y[i + w]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaggedTable {
    pub x: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub window_length: usize,
}

pub fn tabularize(y: &[f64], window_length: usize) -> Result<LaggedTable> {
    if window_length == 0 {
        return Err(invalid("window_length", "must be at least 1"));
    }
    if y.len() < window_length + 1 {
        return Err(Error::SeriesTooShort {
            needed: window_length + 1,
            got: y.len(),
        });
    }
    Ok(LaggedTable {
        x: y.windows(window_length)
            .take(y.len() - window_length)
            .map(<[f64]>::to_vec)
            .collect(),
        targets: y[window_length..].to_vec(),
        window_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStrategy {
    Recursive,
    /// One model per horizon step. Not implemented.
    Direct,
    /// Direct models fed with earlier-step predictions. Not implemented.
    Hybrid,
}

impl ReductionStrategy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "recursive" => Some(Self::Recursive),
            "direct" => Some(Self::Direct),
            "hybrid" => Some(Self::Hybrid),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Recursive => "recursive",
            Self::Direct => "direct",
            Self::Hybrid => "hybrid",
        }
    }
}

/// Forecasting by reduction to tabular regression over lagged windows.
/// Multi-step forecasts use the recursive strategy: each prediction is
/// appended to the window that produces the next one.
#[derive(Debug, Clone)]
pub struct ReducedRegressionForecaster {
    regressor: Box<dyn Regressor>,
    window_length: usize,
    strategy: ReductionStrategy,
    train: Option<TimeSeries>,
}

impl Default for ReducedRegressionForecaster {
    fn default() -> Self {
        Self::new(Box::new(LinearRegression::default()), 10)
    }
}

impl ReducedRegressionForecaster {
    pub fn new(regressor: Box<dyn Regressor>, window_length: usize) -> Self {
        Self {
            regressor,
            window_length,
            strategy: ReductionStrategy::Recursive,
            train: None,
        }
    }

    pub fn with_strategy(mut self, strategy: ReductionStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn regressor(&self) -> &dyn Regressor {
        self.regressor.as_ref()
    }

    fn check_strategy(&self) -> Result<()> {
        match self.strategy {
            ReductionStrategy::Recursive => Ok(()),
            other => Err(Error::Unimplemented(format!(
                "{} reduction strategy",
                other.as_str()
            ))),
        }
    }

    /// Recursive predictions for steps `1..=h` past the end of `train`.
    fn recurse(&self, train: &TimeSeries, h: usize) -> Result<Vec<f64>> {
        let w = self.window_length;
        let v = train.values();
        let mut window: Vec<f64> = v[v.len() - w..].to_vec();
        let mut out = Vec::with_capacity(h);
        for _ in 0..h {
            let next = self.regressor.predict(&window)?;
            out.push(next);
            window.remove(0);
            window.push(next);
        }
        Ok(out)
    }
}

impl Forecaster for ReducedRegressionForecaster {
    fn name(&self) -> &str {
        "ReducedRegressionForecaster"
    }

    fn fit(&mut self, y: &TimeSeries, _fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.train = None;
        self.check_strategy()?;
        let table = tabularize(y.values(), self.window_length)?;
        self.regressor.fit(&table.x, &table.targets)?;
        self.train = Some(y.clone());
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        let train = self.train.as_ref().ok_or(Error::NotFitted)?;
        let cutoff = train.end();
        let w = self.window_length as i64;
        let horizon = positions.iter().map(|p| p - cutoff).max().unwrap_or(0).max(0) as usize;
        let future = self.recurse(train, horizon)?;
        positions
            .iter()
            .map(|&p| {
                if p > cutoff {
                    return Ok(future[(p - cutoff - 1) as usize]);
                }
                let offset = p - train.start();
                if offset < w {
                    return Err(Error::UnsupportedInSample { position: p });
                }
                let o = offset as usize;
                self.regressor.predict(&train.values()[o - w as usize..o])
            })
            .collect()
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        let extended = extend_training(self.train.as_ref(), y_new)?;
        if update_params {
            return self.fit(&extended, None);
        }
        self.train = Some(extended);
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        self.train.as_ref().map(TimeSeries::end)
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("window_length".into(), self.window_length.into());
        p.insert("strategy".into(), self.strategy.as_str().into());
        nest(&mut p, "regressor", self.regressor.get_params());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        let (inner, own) = take_nested(params, "regressor");
        for key in own.keys() {
            if key != "window_length" && key != "strategy" {
                return Err(Error::UnknownParameter(key.clone()));
            }
        }
        if let Some(v) = own.get("window_length") {
            let w = v.as_usize("window_length")?;
            if w == 0 {
                return Err(invalid("window_length", "must be at least 1"));
            }
            self.window_length = w;
        }
        if let Some(v) = own.get("strategy") {
            self.strategy = ReductionStrategy::parse(v.as_str("strategy")?)
                .ok_or_else(|| invalid("strategy", "expected recursive, direct or hybrid"))?;
        }
        if !inner.is_empty() {
            self.regressor.set_params(&inner)?;
        }
        self.train = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        if self.train.is_none() {
            return Err(Error::NotFitted);
        }
        let mut p = Params::new();
        nest(&mut p, "regressor", self.regressor.get_fitted_params()?);
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}
