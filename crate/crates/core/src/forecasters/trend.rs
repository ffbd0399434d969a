use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::forecaster::{check_known, extend_training, Forecaster};
use crate::params::Params;
use crate::regress::min_norm_lstsq;
use crate::series::{ForecastingHorizon, TimeSeries};

/// OLS coefficients of `y` on `(1, t, ..., t^degree)` with `t` the 0-based
/// position within `y`.
pub fn polynomial_trend(y: &TimeSeries, degree: usize) -> Result<Vec<f64>> {
    let n = y.len();
    if n < degree + 1 {
        return Err(Error::SeriesTooShort {
            needed: degree + 1,
            got: n,
        });
    }
    let design = DMatrix::from_fn(n, degree + 1, |i, j| (i as f64).powi(j as i32));
    let target = DVector::from_column_slice(y.values());
    Ok(min_norm_lstsq(&design, &target).iter().copied().collect())
}

fn evaluate(coef: &[f64], t: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Polynomial trend forecaster. The time origin stays anchored at the first
/// training observation, so in-sample (including the cutoff) and
/// out-of-sample positions evaluate the same polynomial.
#[derive(Debug, Clone)]
pub struct PolynomialTrendForecaster {
    degree: usize,
    state: Option<(Vec<f64>, TimeSeries)>,
}

impl PolynomialTrendForecaster {
    pub fn new(degree: usize) -> Self {
        Self { degree, state: None }
    }

    pub fn coefficients(&self) -> Option<&[f64]> {
        self.state.as_ref().map(|(c, _)| c.as_slice())
    }
}

impl Default for PolynomialTrendForecaster {
    fn default() -> Self {
        Self::new(1)
    }
}

impl Forecaster for PolynomialTrendForecaster {
    fn name(&self) -> &str {
        "PolynomialTrendForecaster"
    }

    fn fit(&mut self, y: &TimeSeries, _fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.state = None;
        let coef = polynomial_trend(y, self.degree)?;
        self.state = Some((coef, y.clone()));
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        let (coef, train) = self.state.as_ref().ok_or(Error::NotFitted)?;
        Ok(positions
            .iter()
            .map(|&p| evaluate(coef, (p - train.start()) as f64))
            .collect())
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        let extended = extend_training(self.state.as_ref().map(|(_, y)| y), y_new)?;
        if update_params {
            return self.fit(&extended, None);
        }
        if let Some((_, train)) = self.state.as_mut() {
            *train = extended;
        }
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        self.state.as_ref().map(|(_, y)| y.end())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("degree".into(), self.degree.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["degree"])?;
        if let Some(v) = params.get("degree") {
            self.degree = v.as_usize("degree")?;
        }
        self.state = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let (coef, _) = self.state.as_ref().ok_or(Error::NotFitted)?;
        Ok(coef
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("coef_{i}"), (*c).into()))
            .collect())
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> TimeSeries {
        TimeSeries::new((0..10).map(|t| 2.0 * t as f64 + 1.0).collect()).unwrap()
    }

    /// Closed-form simple regression via the normal equations.
    fn normal_equations(y: &[f64]) -> (f64, f64) {
        let n = y.len() as f64;
        let t_mean = (n - 1.0) / 2.0;
        let y_mean = y.iter().sum::<f64>() / n;
        let sxy: f64 = y.iter().enumerate().map(|(t, v)| (t as f64 - t_mean) * (v - y_mean)).sum();
        let sxx: f64 = (0..y.len()).map(|t| (t as f64 - t_mean).powi(2)).sum();
        let slope = sxy / sxx;
        (y_mean - slope * t_mean, slope)
    }

    #[test]
    fn linear_trend_exact() {
        let y = line();
        let (b0, b1) = normal_equations(y.values());
        let mut m = PolynomialTrendForecaster::new(1);
        m.fit(&y, None).unwrap();
        let coef = m.coefficients().unwrap();
        assert!((coef[0] - b0).abs() < 1e-8 && (coef[1] - b1).abs() < 1e-8);
        assert!((coef[0] - 1.0).abs() < 1e-8 && (coef[1] - 2.0).abs() < 1e-8);
        let fc = m.predict(&ForecastingHorizon::ahead(2).unwrap()).unwrap();
        assert!((fc.values[0] - 21.0).abs() < 1e-8);
        assert!((fc.values[1] - 23.0).abs() < 1e-8);
        // In-sample, negative steps.
        let fc = m.predict(&ForecastingHorizon::new(vec![-9, -1]).unwrap()).unwrap();
        assert!((fc.values[0] - 1.0).abs() < 1e-8);
        assert!((fc.values[1] - 17.0).abs() < 1e-8);
    }

    #[test]
    fn degree_zero_is_mean() {
        let y = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!((polynomial_trend(&y, 0).unwrap()[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn too_short_for_degree() {
        let y = TimeSeries::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(
            polynomial_trend(&y, 2),
            Err(Error::SeriesTooShort { needed: 3, got: 2 })
        );
    }

    #[test]
    fn update_keeps_time_origin() {
        let y = line();
        let mut m = PolynomialTrendForecaster::new(1);
        m.fit(&y, None).unwrap();
        let before = m.predict(&ForecastingHorizon::new(vec![3]).unwrap()).unwrap();
        m.update(&TimeSeries::with_start(vec![21.0, 23.0], 10, 1).unwrap(), false)
            .unwrap();
        let after = m.predict(&ForecastingHorizon::new(vec![1]).unwrap()).unwrap();
        assert_eq!(before.values, after.values);
    }
}
