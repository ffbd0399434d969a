//! The classical two-line Theta method.
//!
//! Theta line 0 is the OLS linear trend of the series, extrapolated as a
//! line. Theta line 2 is `2y - line0`, extrapolated with SES. The forecast is
//! the equal-weight mean of the two extrapolations. The input is expected to
//! be deseasonalized already.

use serde::{Deserialize, Serialize};

use super::smoothing::{ExponentialSmoothing, SmoothingParams};
use super::trend::polynomial_trend;
use crate::error::{Error, Result};
use crate::forecaster::{check_known, extend_training, Forecaster};
use crate::params::Params;
use crate::series::{Forecast, ForecastingHorizon, TimeSeries};

pub const THETA_LINE_TREND: f64 = 0.0;
pub const THETA_LINE_CURVATURE: f64 = 2.0;
const MIN_LENGTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaParams {
    pub theta1: f64,
    pub theta2: f64,
    pub intercept: f64,
    /// Slope of theta line 0 per index step.
    pub slope: f64,
    pub ses: SmoothingParams,
}

#[derive(Debug, Clone)]
struct ThetaState {
    intercept: f64,
    slope: f64,
    ses: ExponentialSmoothing,
    train: TimeSeries,
}

impl ThetaState {
    fn line(&self, position: i64) -> f64 {
        self.intercept + self.slope * (position - self.train.start()) as f64
    }
}

#[derive(Debug, Clone, Default)]
pub struct ThetaForecaster {
    /// Fixed SES smoothing for theta line 2; `None` estimates it.
    alpha: Option<f64>,
    state: Option<ThetaState>,
}

impl ThetaForecaster {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha: Some(alpha),
            state: None,
        }
    }

    pub fn params(&self) -> Option<ThetaParams> {
        let s = self.state.as_ref()?;
        Some(ThetaParams {
            theta1: THETA_LINE_TREND,
            theta2: THETA_LINE_CURVATURE,
            intercept: s.intercept,
            slope: s.slope,
            ses: *s.ses.params()?,
        })
    }

    /// Extrapolations of both theta lines at `positions`, in that order.
    pub fn theta_lines_at(&self, positions: &[i64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let s = self.state.as_ref().ok_or(Error::NotFitted)?;
        let line0 = positions.iter().map(|&p| s.line(p)).collect();
        let line2 = s.ses.predict_at(positions)?;
        Ok((line0, line2))
    }

    fn curvature_line(intercept: f64, slope: f64, y: &TimeSeries, origin: i64) -> Result<TimeSeries> {
        let values = y
            .positions()
            .zip(y.values())
            .map(|(p, v)| {
                let line = intercept + slope * (p - origin) as f64;
                THETA_LINE_CURVATURE * v + (1.0 - THETA_LINE_CURVATURE) * line
            })
            .collect();
        y.with_values(values)
    }

    fn new_ses(&self) -> ExponentialSmoothing {
        match self.alpha {
            Some(a) => ExponentialSmoothing::ses().with_alpha(a),
            None => ExponentialSmoothing::ses(),
        }
    }
}

impl Forecaster for ThetaForecaster {
    fn name(&self) -> &str {
        "Theta"
    }

    fn fit(&mut self, y: &TimeSeries, _fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.state = None;
        if y.len() < MIN_LENGTH {
            return Err(Error::SeriesTooShort {
                needed: MIN_LENGTH,
                got: y.len(),
            });
        }
        let coef = polynomial_trend(y, 1)?;
        let (intercept, slope) = (coef[0], coef[1]);
        let line2 = Self::curvature_line(intercept, slope, y, y.start())?;
        let mut ses = self.new_ses();
        ses.fit(&line2, None)?;
        self.state = Some(ThetaState {
            intercept,
            slope,
            ses,
            train: y.clone(),
        });
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        let (line0, line2) = self.theta_lines_at(positions)?;
        Ok(line0
            .iter()
            .zip(&line2)
            .map(|(a, b)| 0.5 * a + 0.5 * b)
            .collect())
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        let extended = extend_training(self.state.as_ref().map(|s| &s.train), y_new)?;
        if update_params {
            return self.fit(&extended, None);
        }
        let s = self.state.as_mut().ok_or(Error::NotFitted)?;
        let line2 = Self::curvature_line(s.intercept, s.slope, y_new, s.train.start())?;
        s.ses.update(&line2, false)?;
        s.train = extended;
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        self.state.as_ref().map(|s| s.train.end())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("alpha".into(), self.alpha.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["alpha"])?;
        if let Some(v) = params.get("alpha") {
            self.alpha = v.as_opt_f64("alpha")?;
        }
        self.state = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let s = self.state.as_ref().ok_or(Error::NotFitted)?;
        let ses = s.ses.get_fitted_params()?;
        let mut p = Params::new();
        p.insert("intercept".into(), s.intercept.into());
        p.insert("slope".into(), s.slope.into());
        p.insert("alpha".into(), ses["alpha"].clone());
        p.insert("level".into(), ses["level"].clone());
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}

/// One-shot Theta forecast.
pub fn theta_forecast(y: &TimeSeries, fh: &ForecastingHorizon) -> Result<Forecast> {
    let mut m = ThetaForecaster::new();
    m.fit(y, None)?;
    m.predict(fh)
}
