use serde::{Deserialize, Serialize};

use super::{check_same_len, Transformer};
use crate::error::{Error, Result};
use crate::forecaster::check_known;
use crate::params::Params;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardizeParams {
    pub mean: f64,
    /// Population standard deviation, or 1 for constant input.
    pub std: f64,
}

/// Removes the mean and scales to unit (population) variance.
#[derive(Debug, Clone, Default)]
pub struct Standardizer {
    state: Option<StandardizeParams>,
}

impl Standardizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn params(&self) -> Option<StandardizeParams> {
        self.state
    }

    fn state(&self) -> Result<StandardizeParams> {
        self.state.ok_or(Error::NotFitted)
    }
}

impl Transformer for Standardizer {
    fn name(&self) -> &str {
        "Standardizer"
    }

    fn fit(&mut self, y: &TimeSeries) -> Result<()> {
        let n = y.len() as f64;
        let mean = y.values().iter().sum::<f64>() / n;
        let var = y.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        self.state = Some(StandardizeParams {
            mean,
            std: if std > 0.0 { std } else { 1.0 },
        });
        Ok(())
    }

    fn transform_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let s = self.state()?;
        Ok(values.iter().map(|v| (v - s.mean) / s.std).collect())
    }

    fn inverse_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let s = self.state()?;
        Ok(values.iter().map(|v| v * s.std + s.mean).collect())
    }

    fn get_params(&self) -> Params {
        Params::new()
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &[])?;
        self.state = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let s = self.state()?;
        let mut p = Params::new();
        p.insert("mean".into(), s.mean.into());
        p.insert("std".into(), s.std.into());
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Transformer> {
        Box::new(self.clone())
    }
}
