//! Single-series transformers with exact inverses.
//!
//! Like forecasters, transformers work on absolute positions, so a fitted
//! transformer can map in-sample data, future forecasts or any sparse set of
//! positions consistently.

mod boxcox;
mod detrend;
mod seasonal;
mod standardize;

use std::fmt;

pub use boxcox::{boxcox, boxcox_fit, boxcox_inverse, boxcox_loglik, BoxCox, BoxCoxParams, LAMBDA_BOUNDS};
pub use detrend::Detrender;
pub use seasonal::{
    acf, classical_decompose, seasonality_test, seasonality_test_with, Deseasonalizer, SeasonalIndices,
    DEFAULT_MIN_CYCLES, SEASONALITY_Z,
};
pub use standardize::{StandardizeParams, Standardizer};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::series::TimeSeries;

pub trait Transformer: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn fit(&mut self, y: &TimeSeries) -> Result<()>;

    /// Transform `values` observed at absolute `positions`.
    fn transform_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>>;

    fn inverse_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>>;

    /// Observe data following the fitted stretch without re-estimating.
    /// Only transformers backed by a stateful model need this.
    fn update(&mut self, _y_new: &TimeSeries) -> Result<()> {
        Ok(())
    }

    fn get_params(&self) -> Params;

    fn set_params(&mut self, params: &Params) -> Result<()>;

    fn get_fitted_params(&self) -> Result<Params>;

    fn clone_box(&self) -> Box<dyn Transformer>;

    fn transform(&self, y: &TimeSeries) -> Result<TimeSeries> {
        let positions: Vec<i64> = y.positions().collect();
        y.with_values(self.transform_at(&positions, y.values())?)
    }

    fn inverse_transform(&self, y: &TimeSeries) -> Result<TimeSeries> {
        let positions: Vec<i64> = y.positions().collect();
        y.with_values(self.inverse_at(&positions, y.values())?)
    }
}

impl Clone for Box<dyn Transformer> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub(crate) fn check_same_len(positions: &[i64], values: &[f64]) -> Result<()> {
    if positions.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: positions.len(),
            right: values.len(),
        });
    }
    Ok(())
}
