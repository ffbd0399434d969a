use super::{check_table, Regressor};
use crate::error::{Error, Result};
use crate::forecaster::check_known;
use crate::params::{invalid, Params};

/// k-nearest-neighbours regression with Euclidean distance. Prediction is the
/// mean target of the `k` closest rows; equal distances favour the lower row
/// index.
#[derive(Debug, Clone)]
pub struct KNeighborsRegressor {
    k: usize,
    table: Option<(Vec<Vec<f64>>, Vec<f64>)>,
}

impl Default for KNeighborsRegressor {
    fn default() -> Self {
        Self::new(1)
    }
}

impl KNeighborsRegressor {
    pub fn new(k: usize) -> Self {
        Self { k, table: None }
    }
}

impl Regressor for KNeighborsRegressor {
    fn name(&self) -> &str {
        "KNeighborsRegressor"
    }

    fn fit(&mut self, x: &[Vec<f64>], y: &[f64]) -> Result<()> {
        self.table = None;
        check_table(x, y)?;
        if self.k == 0 {
            return Err(invalid("k", "must be at least 1"));
        }
        if self.k > x.len() {
            return Err(Error::KTooLarge { k: self.k, n: x.len() });
        }
        self.table = Some((x.to_vec(), y.to_vec()));
        Ok(())
    }

    fn predict(&self, row: &[f64]) -> Result<f64> {
        let (x, y) = self.table.as_ref().ok_or(Error::NotFitted)?;
        if row.len() != x[0].len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} features, got {}",
                x[0].len(),
                row.len()
            )));
        }
        let mut dist: Vec<(f64, usize)> = x
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d2: f64 = r.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        // Squared distances order the same as distances; index breaks ties.
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let sum: f64 = dist[..self.k].iter().map(|&(_, i)| y[i]).sum();
        Ok(sum / self.k as f64)
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("k".into(), self.k.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["k"])?;
        if let Some(v) = params.get("k") {
            self.k = v.as_usize("k")?;
        }
        self.table = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let (x, _) = self.table.as_ref().ok_or(Error::NotFitted)?;
        let mut p = Params::new();
        p.insert("n_samples".into(), x.len().into());
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Regressor> {
        Box::new(self.clone())
    }
}
