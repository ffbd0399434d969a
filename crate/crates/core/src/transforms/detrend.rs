use super::{check_same_len, Transformer};
use crate::error::Result;
use crate::forecaster::Forecaster;
use crate::forecasters::PolynomialTrendForecaster;
use crate::params::{nest, take_nested, Params};
use crate::series::TimeSeries;

/// Residuals of a wrapped forecaster. `transform` subtracts the forecaster's
/// predictions at the given positions (in-sample or beyond the cutoff),
/// `inverse_at` adds them back.
#[derive(Debug, Clone)]
pub struct Detrender {
    forecaster: Box<dyn Forecaster>,
}

impl Default for Detrender {
    fn default() -> Self {
        Self::new(Box::new(PolynomialTrendForecaster::new(1)))
    }
}

impl Detrender {
    pub fn new(forecaster: Box<dyn Forecaster>) -> Self {
        Self { forecaster }
    }

    pub fn forecaster(&self) -> &dyn Forecaster {
        self.forecaster.as_ref()
    }
}

impl Transformer for Detrender {
    fn name(&self) -> &str {
        "Detrender"
    }

    fn fit(&mut self, y: &TimeSeries) -> Result<()> {
        self.forecaster.fit(y, None)
    }

    fn transform_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let pred = self.forecaster.predict_at(positions)?;
        Ok(values.iter().zip(&pred).map(|(v, p)| v - p).collect())
    }

    fn inverse_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let pred = self.forecaster.predict_at(positions)?;
        Ok(values.iter().zip(&pred).map(|(v, p)| v + p).collect())
    }

    fn update(&mut self, y_new: &TimeSeries) -> Result<()> {
        self.forecaster.update(y_new, false)
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        nest(&mut p, "forecaster", self.forecaster.get_params());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        let (inner, rest) = take_nested(params, "forecaster");
        if let Some(key) = rest.keys().next() {
            return Err(crate::error::Error::UnknownParameter(key.clone()));
        }
        self.forecaster.set_params(&inner)
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let mut p = Params::new();
        nest(&mut p, "forecaster", self.forecaster.get_fitted_params()?);
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Transformer> {
        Box::new(self.clone())
    }
}
