//! Reference forecasting algorithms.

mod naive;
pub mod optim;
mod smoothing;
mod theta;
mod trend;

pub use naive::{naive_forecast, NaiveForecaster, NaiveStrategy};
pub use smoothing::{
    fit_smoothing, holt_fit, holt_predict, ses_fit, ExponentialSmoothing, Filtered, FixedSmoothing,
    SmoothingParams, TrendKind, PHI_BOUNDS,
};
pub use theta::{theta_forecast, ThetaForecaster, ThetaParams, THETA_LINE_CURVATURE, THETA_LINE_TREND};
pub use trend::{polynomial_trend, PolynomialTrendForecaster};
