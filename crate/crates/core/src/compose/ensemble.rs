use crate::error::{Error, Result};
use crate::forecaster::Forecaster;
use crate::params::{nest, take_nested, Params};
use crate::series::{ForecastingHorizon, TimeSeries};

/// Unweighted mean of independently fitted forecasters.
#[derive(Debug, Clone)]
pub struct EnsembleForecaster {
    components: Vec<(String, Box<dyn Forecaster>)>,
}

impl EnsembleForecaster {
    pub fn new(components: Vec<(String, Box<dyn Forecaster>)>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> impl Iterator<Item = (&str, &dyn Forecaster)> {
        self.components.iter().map(|(n, f)| (n.as_str(), f.as_ref()))
    }
}

impl Forecaster for EnsembleForecaster {
    fn name(&self) -> &str {
        "EnsembleForecaster"
    }

    fn fit(&mut self, y: &TimeSeries, fh: Option<&ForecastingHorizon>) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidParameter {
                name: "components".into(),
                reason: "an ensemble needs at least one forecaster".into(),
            });
        }
        for (_, f) in &mut self.components {
            f.fit(y, fh)?;
        }
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        if !self.is_fitted() {
            return Err(Error::NotFitted);
        }
        let mut sum = vec![0.0; positions.len()];
        for (_, f) in &self.components {
            for (s, v) in sum.iter_mut().zip(f.predict_at(positions)?) {
                *s += v;
            }
        }
        let k = self.components.len() as f64;
        Ok(sum.into_iter().map(|s| s / k).collect())
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        for (_, f) in &mut self.components {
            f.update(y_new, update_params)?;
        }
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        let first = self.components.first()?.1.cutoff()?;
        self.components
            .iter()
            .all(|(_, f)| f.cutoff() == Some(first))
            .then_some(first)
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        for (name, f) in &self.components {
            nest(&mut p, name, f.get_params());
        }
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        let mut rest = params.clone();
        for (name, f) in &mut self.components {
            let (mine, others) = take_nested(&rest, name);
            if !mine.is_empty() {
                f.set_params(&mine)?;
            }
            rest = others;
        }
        if let Some(key) = rest.keys().next() {
            return Err(Error::UnknownParameter(key.clone()));
        }
        // Members fit together; an empty update discards every member's fit.
        for (_, f) in &mut self.components {
            f.set_params(&Params::new())?;
        }
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let mut p = Params::new();
        for (name, f) in &self.components {
            nest(&mut p, name, f.get_fitted_params()?);
        }
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecasters::NaiveForecaster;

    #[test]
    fn naive_and_seasonal_mean() {
        let y = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let mut e = EnsembleForecaster::new(vec![
            ("naive".into(), Box::new(NaiveForecaster::last())),
            ("snaive".into(), Box::new(NaiveForecaster::seasonal(2))),
        ]);
        e.fit(&y, None).unwrap();
        assert_eq!(e.predict(&ForecastingHorizon::ahead(1).unwrap()).unwrap().values, vec![3.5]);
    }

    #[test]
    fn single_member_is_identity() {
        let y = TimeSeries::new(vec![1.0, 5.0, 2.0]).unwrap();
        let mut e = EnsembleForecaster::new(vec![("n".into(), Box::new(NaiveForecaster::last()))]);
        e.fit(&y, None).unwrap();
        let mut n = NaiveForecaster::last();
        n.fit(&y, None).unwrap();
        let fh = ForecastingHorizon::ahead(3).unwrap();
        assert_eq!(e.predict(&fh).unwrap(), n.predict(&fh).unwrap());
    }

    #[test]
    fn set_params_clears_fit() {
        let y = TimeSeries::new(vec![1.0, 5.0, 2.0]).unwrap();
        let mut e = EnsembleForecaster::new(vec![
            ("a".into(), Box::new(NaiveForecaster::last())),
            ("b".into(), Box::new(NaiveForecaster::last())),
        ]);
        e.fit(&y, None).unwrap();
        e.set_params(&crate::params::params([("a.strategy", "last")])).unwrap();
        assert!(!e.is_fitted());
        assert!(matches!(
            e.set_params(&crate::params::params([("c.strategy", "last")])),
            Err(Error::UnknownParameter(_))
        ));
    }
}
