use nalgebra::{DMatrix, DVector};

use super::{check_table, Regressor};
use crate::error::{Error, Result};
use crate::forecaster::check_known;
use crate::params::Params;

/// Minimum-norm least-squares solution of `x * beta = y` via SVD, zeroing
/// singular values below `max(sv) * max(n, p) * eps`.
pub fn min_norm_lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> DVector<f64> {
    let svd = x.clone().svd(true, true);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = max_sv * x.nrows().max(x.ncols()) as f64 * f64::EPSILON;
    svd.solve(y, eps)
        .expect("both singular vector sets were requested")
}

/// Ordinary least squares. With `fit_intercept` the design and target are
/// centered first, so the intercept is unpenalized and the slope vector is
/// the minimum-norm solution on the centered problem.
#[derive(Debug, Clone)]
pub struct LinearRegression {
    fit_intercept: bool,
    fitted: Option<(DVector<f64>, f64)>,
}

impl Default for LinearRegression {
    fn default() -> Self {
        Self::new(true)
    }
}

impl LinearRegression {
    pub fn new(fit_intercept: bool) -> Self {
        Self {
            fit_intercept,
            fitted: None,
        }
    }

    pub fn coefficients(&self) -> Option<(&[f64], f64)> {
        self.fitted.as_ref().map(|(c, b)| (c.as_slice(), *b))
    }
}

impl Regressor for LinearRegression {
    fn name(&self) -> &str {
        "LinearRegression"
    }

    fn fit(&mut self, x: &[Vec<f64>], y: &[f64]) -> Result<()> {
        self.fitted = None;
        let p = check_table(x, y)?;
        let n = x.len();
        let (x_mean, y_mean) = if self.fit_intercept {
            let mut xm = vec![0.0; p];
            for row in x {
                for (m, v) in xm.iter_mut().zip(row) {
                    *m += v / n as f64;
                }
            }
            (xm, y.iter().sum::<f64>() / n as f64)
        } else {
            (vec![0.0; p], 0.0)
        };
        let design = DMatrix::from_fn(n, p, |i, j| x[i][j] - x_mean[j]);
        let target = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));
        let coef = if p == 0 {
            DVector::zeros(0)
        } else {
            min_norm_lstsq(&design, &target)
        };
        let intercept = y_mean - coef.iter().zip(&x_mean).map(|(c, m)| c * m).sum::<f64>();
        self.fitted = Some((coef, intercept));
        Ok(())
    }

    fn predict(&self, row: &[f64]) -> Result<f64> {
        let (coef, intercept) = self.fitted.as_ref().ok_or(Error::NotFitted)?;
        if row.len() != coef.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} features, got {}",
                coef.len(),
                row.len()
            )));
        }
        Ok(intercept + coef.iter().zip(row).map(|(c, v)| c * v).sum::<f64>())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("fit_intercept".into(), self.fit_intercept.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["fit_intercept"])?;
        if let Some(v) = params.get("fit_intercept") {
            self.fit_intercept = v.as_bool("fit_intercept")?;
        }
        self.fitted = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let (coef, intercept) = self.fitted.as_ref().ok_or(Error::NotFitted)?;
        let mut p = Params::new();
        p.insert("intercept".into(), (*intercept).into());
        for (i, c) in coef.iter().enumerate() {
            p.insert(format!("coef_{i}"), (*c).into());
        }
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Regressor> {
        Box::new(self.clone())
    }
}
