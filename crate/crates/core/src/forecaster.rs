//! The uniform forecaster contract shared by simple and composite models.

use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::select::SlidingWindowSplitter;
use crate::series::{Forecast, ForecastingHorizon, TimeSeries};

/// A univariate forecaster.
///
/// Implementations are single-owner mutable state. `fit` always resets
/// whatever a previous fit left behind; `set_params` discards fitted state.
///
/// Prediction is position based underneath: [`Forecaster::predict_at`]
/// takes absolute time indices, which lets composites (detrending,
/// pipelines) ask for values at the cutoff itself or at arbitrary in-sample
/// positions. [`Forecaster::predict`] is the relative-horizon front door.
pub trait Forecaster: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Fit on `y`. The horizon is only used by models with per-step
    /// parameters; all models shipped here ignore it.
    fn fit(&mut self, y: &TimeSeries, fh: Option<&ForecastingHorizon>) -> Result<()>;

    /// Predictions at absolute positions. Positions `<= cutoff` are in-sample.
    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>>;

    /// Feed observations that start right after the cutoff. With
    /// `update_params` the model refits on everything seen so far; otherwise
    /// only the prediction state (last values, recursions) advances.
    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()>;

    /// Last index seen in training or updating; `None` until fitted.
    fn cutoff(&self) -> Option<i64>;

    fn get_params(&self) -> Params;

    fn set_params(&mut self, params: &Params) -> Result<()>;

    fn get_fitted_params(&self) -> Result<Params>;

    fn clone_box(&self) -> Box<dyn Forecaster>;

    fn is_fitted(&self) -> bool {
        self.cutoff().is_some()
    }

    fn predict(&self, fh: &ForecastingHorizon) -> Result<Forecast> {
        let cutoff = self.cutoff().ok_or(Error::NotFitted)?;
        let values = self.predict_at(&fh.resolve(cutoff))?;
        Forecast::new(fh.clone(), values)
    }
}

impl Clone for Box<dyn Forecaster> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// Dynamic forecasting over a test stretch following the training data.
///
/// Forecasts are made at every cutoff proposed by `cv` (see
/// [`SlidingWindowSplitter::update_offsets`]); between cutoffs the forecaster
/// is updated with the newly observed values. Results are keyed by cutoff.
pub fn update_predict(
    forecaster: &mut dyn Forecaster,
    y_test: &TimeSeries,
    cv: &SlidingWindowSplitter,
    update_params: bool,
) -> Result<Vec<(i64, Forecast)>> {
    let cutoff = forecaster.cutoff().ok_or(Error::NotFitted)?;
    if y_test.start() != cutoff + 1 {
        return Err(Error::NonContiguousUpdate {
            expected: cutoff + 1,
            got: y_test.start(),
        });
    }
    let mut consumed = 0usize;
    let mut out = Vec::new();
    for offset in cv.update_offsets(y_test.len()) {
        if offset > consumed {
            let chunk = y_test.slice(consumed..offset)?;
            forecaster.update(&chunk, update_params)?;
            consumed = offset;
        }
        let forecast = forecaster.predict(cv.fh())?;
        let at = forecaster.cutoff().ok_or(Error::NotFitted)?;
        out.push((at, forecast));
    }
    Ok(out)
}

/// Checks shared by every `update` implementation; returns the concatenated
/// training series.
pub(crate) fn extend_training(train: Option<&TimeSeries>, y_new: &TimeSeries) -> Result<TimeSeries> {
    let train = train.ok_or(Error::NotFitted)?;
    train.append(y_new)
}

/// Reject parameter keys a leaf estimator does not declare.
pub(crate) fn check_known(params: &Params, known: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !known.contains(&key.as_str()) {
            return Err(Error::UnknownParameter(key.clone()));
        }
    }
    Ok(())
}
