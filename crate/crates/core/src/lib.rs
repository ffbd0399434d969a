//! Composable univariate forecasting.
//!
//! Every model implements [`Forecaster`]: fit on a [`TimeSeries`], predict a
//! relative [`ForecastingHorizon`] from the cutoff, update with new data.
//! Composites (reduction, pipelines, ensembles, grid search) implement the
//! same trait, so they nest freely.

pub mod compose;
pub mod error;
pub mod eval;
pub mod forecaster;
pub mod forecasters;
pub mod params;
pub mod regress;
pub mod select;
pub mod series;
pub mod transforms;

pub use error::{Error, Result};
pub use forecaster::{update_predict, Forecaster};
pub use params::{ParamValue, Params};
pub use series::{Forecast, ForecastingHorizon, TimeSeries};
