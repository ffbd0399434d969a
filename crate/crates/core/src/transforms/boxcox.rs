use serde::{Deserialize, Serialize};

use super::{check_same_len, Transformer};
use crate::error::{Error, Result};
use crate::forecasters::optim::golden_section_max;
use crate::params::Params;
use crate::series::TimeSeries;

/// Search interval for lambda, strictly inside (0, 1).
pub const LAMBDA_BOUNDS: (f64, f64) = (1e-4, 1.0 - 1e-4);
const GRID_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCoxParams {
    pub lambda: f64,
}

pub fn boxcox(y: f64, lambda: f64) -> f64 {
    (y.powf(lambda) - 1.0) / lambda
}

/// Inverse of [`boxcox`]. Values below the image of 0 map to 0.
pub fn boxcox_inverse(x: f64, lambda: f64) -> f64 {
    (lambda * x + 1.0).max(0.0).powf(1.0 / lambda)
}

/// Gaussian profile log-likelihood of lambda, up to a constant:
/// `-n/2 * ln(var(z)) + (lambda - 1) * sum(ln y)`, with `z` the transformed
/// data and `var` the population variance.
pub fn boxcox_loglik(values: &[f64], lambda: f64) -> f64 {
    let n = values.len() as f64;
    let z: Vec<f64> = values.iter().map(|v| boxcox(*v, lambda)).collect();
    let mean = z.iter().sum::<f64>() / n;
    let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let log_sum: f64 = values.iter().map(|v| v.ln()).sum();
    -0.5 * n * var.ln() + (lambda - 1.0) * log_sum
}

/// Maximum likelihood lambda on [`LAMBDA_BOUNDS`]: a uniform grid locates
/// the best bracket, golden-section search refines it.
pub fn boxcox_fit(values: &[f64]) -> Result<BoxCoxParams> {
    if values.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }
    if values.iter().any(|v| *v <= 0.0 || !v.is_finite()) {
        return Err(Error::NonPositiveValues);
    }
    let (lo, hi) = LAMBDA_BOUNDS;
    let first = values[0];
    if values.iter().all(|v| *v == first) {
        // Flat likelihood; any lambda is optimal.
        return Ok(BoxCoxParams { lambda: hi });
    }
    let step = (hi - lo) / GRID_POINTS as f64;
    let grid: Vec<f64> = (0..=GRID_POINTS).map(|i| lo + i as f64 * step).collect();
    let scores: Vec<f64> = grid.iter().map(|l| boxcox_loglik(values, *l)).collect();
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if s.is_finite() && (!scores[best].is_finite() || *s > scores[best]) {
            best = i;
        }
    }
    if !scores[best].is_finite() {
        return Err(Error::OptimizerFailed("Box-Cox likelihood is not finite".into()));
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(GRID_POINTS)];
    let refined = golden_section_max(|l| boxcox_loglik(values, l), a, b, 1e-10);
    let lambda = if boxcox_loglik(values, refined) >= scores[best] {
        refined
    } else {
        grid[best]
    };
    Ok(BoxCoxParams {
        lambda: lambda.clamp(lo, hi),
    })
}

/// Box-Cox power transform with lambda estimated by maximum likelihood, or
/// fixed.
#[derive(Debug, Clone, Default)]
pub struct BoxCox {
    fixed_lambda: Option<f64>,
    state: Option<BoxCoxParams>,
}

impl BoxCox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_lambda(lambda: f64) -> Self {
        Self {
            fixed_lambda: Some(lambda),
            state: None,
        }
    }

    pub fn params(&self) -> Option<BoxCoxParams> {
        self.state
    }

    fn lambda(&self) -> Result<f64> {
        self.state.map(|s| s.lambda).ok_or(Error::NotFitted)
    }
}

impl Transformer for BoxCox {
    fn name(&self) -> &str {
        "BoxCox"
    }

    fn fit(&mut self, y: &TimeSeries) -> Result<()> {
        self.state = None;
        self.state = Some(match self.fixed_lambda {
            Some(lambda) => {
                if y.values().iter().any(|v| *v <= 0.0) {
                    return Err(Error::NonPositiveValues);
                }
                BoxCoxParams { lambda }
            }
            None => boxcox_fit(y.values())?,
        });
        Ok(())
    }

    fn transform_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let lambda = self.lambda()?;
        if values.iter().any(|v| *v <= 0.0) {
            return Err(Error::NonPositiveValues);
        }
        Ok(values.iter().map(|v| boxcox(*v, lambda)).collect())
    }

    fn inverse_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let lambda = self.lambda()?;
        Ok(values.iter().map(|v| boxcox_inverse(*v, lambda)).collect())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("lambda".into(), self.fixed_lambda.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        crate::forecaster::check_known(params, &["lambda"])?;
        if let Some(v) = params.get("lambda") {
            self.fixed_lambda = v.as_opt_f64("lambda")?;
        }
        self.state = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let mut p = Params::new();
        p.insert("lambda".into(), self.lambda()?.into());
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Transformer> {
        Box::new(self.clone())
    }
}
