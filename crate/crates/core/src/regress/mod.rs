//! Tabular regressors used by the reduction forecaster.
//!
//! [`Regressor`] is the seam: anything that can fit a dense table and predict
//! one row at a time plugs into [`crate::compose::ReducedRegressionForecaster`].
//! Two reference implementations ship here.

mod knn;
mod linear;

use std::fmt;

pub use knn::KNeighborsRegressor;
pub use linear::{min_norm_lstsq, LinearRegression};

use crate::error::{Error, Result};
use crate::params::Params;

pub trait Regressor: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Fit on rows `x` (all of equal width) and targets `y`.
    fn fit(&mut self, x: &[Vec<f64>], y: &[f64]) -> Result<()>;

    fn predict(&self, row: &[f64]) -> Result<f64>;

    fn get_params(&self) -> Params;

    fn set_params(&mut self, params: &Params) -> Result<()>;

    fn get_fitted_params(&self) -> Result<Params>;

    fn clone_box(&self) -> Box<dyn Regressor>;
}

impl Clone for Box<dyn Regressor> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegressorKind {
    Linear,
    Knn,
}

/// Declarative description of a reference regressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegressorSpec {
    pub kind: RegressorKind,
    pub fit_intercept: bool,
    pub k: usize,
}

impl RegressorSpec {
    pub fn linear() -> Self {
        Self {
            kind: RegressorKind::Linear,
            fit_intercept: true,
            k: 1,
        }
    }

    pub fn knn(k: usize) -> Self {
        Self {
            kind: RegressorKind::Knn,
            fit_intercept: true,
            k,
        }
    }

    pub fn build(&self) -> Box<dyn Regressor> {
        match self.kind {
            RegressorKind::Linear => Box::new(LinearRegression::new(self.fit_intercept)),
            RegressorKind::Knn => Box::new(KNeighborsRegressor::new(self.k)),
        }
    }
}

/// Validate a design table; returns its width.
pub(crate) fn check_table(x: &[Vec<f64>], y: &[f64]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::DimensionMismatch("empty design table".into()));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but {} targets",
            x.len(),
            y.len()
        )));
    }
    let p = x[0].len();
    if x.iter().any(|r| r.len() != p) {
        return Err(Error::DimensionMismatch("ragged design table".into()));
    }
    if x.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(p)
}
