use crate::error::{Error, Result};
use crate::forecaster::{extend_training, Forecaster};
use crate::params::{nest, take_nested, Params};
use crate::series::{ForecastingHorizon, TimeSeries};
use crate::transforms::Transformer;

/// Transformers applied to the target before a final forecaster; forecasts
/// are mapped back through the inverse transforms in reverse order.
///
/// Parameters of each step are addressed as `"<step name>.<param>"`.
#[derive(Debug, Clone)]
pub struct TransformedTargetForecaster {
    transformers: Vec<(String, Box<dyn Transformer>)>,
    forecaster_name: String,
    forecaster: Box<dyn Forecaster>,
    train: Option<TimeSeries>,
}

impl TransformedTargetForecaster {
    pub fn new(
        transformers: Vec<(String, Box<dyn Transformer>)>,
        forecaster_name: impl Into<String>,
        forecaster: Box<dyn Forecaster>,
    ) -> Self {
        Self {
            transformers,
            forecaster_name: forecaster_name.into(),
            forecaster,
            train: None,
        }
    }

    /// Builder-style: `TransformedTargetForecaster::from(f).with_step(...)`
    /// reads in application order.
    pub fn with_step(mut self, name: impl Into<String>, transformer: Box<dyn Transformer>) -> Self {
        self.transformers.push((name.into(), transformer));
        self.train = None;
        self
    }

    pub fn steps(&self) -> impl Iterator<Item = (&str, &dyn Transformer)> {
        self.transformers.iter().map(|(n, t)| (n.as_str(), t.as_ref()))
    }

    pub fn forecaster(&self) -> &dyn Forecaster {
        self.forecaster.as_ref()
    }

    fn check_names(&self) -> Result<()> {
        let mut names: Vec<&str> = self.transformers.iter().map(|(n, _)| n.as_str()).collect();
        names.push(&self.forecaster_name);
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != names.len() || names.iter().any(|n| n.is_empty() || n.contains('.')) {
            return Err(Error::InvalidParameter {
                name: "steps".into(),
                reason: "step names must be unique, non-empty and free of '.'".into(),
            });
        }
        Ok(())
    }
}

impl From<Box<dyn Forecaster>> for TransformedTargetForecaster {
    fn from(forecaster: Box<dyn Forecaster>) -> Self {
        Self::new(Vec::new(), "forecaster", forecaster)
    }
}

impl Forecaster for TransformedTargetForecaster {
    fn name(&self) -> &str {
        "TransformedTargetForecaster"
    }

    fn fit(&mut self, y: &TimeSeries, fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.train = None;
        self.check_names()?;
        let mut current = y.clone();
        for (_, t) in &mut self.transformers {
            t.fit(&current)?;
            current = t.transform(&current)?;
        }
        self.forecaster.fit(&current, fh)?;
        self.train = Some(y.clone());
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        if self.train.is_none() {
            return Err(Error::NotFitted);
        }
        let mut values = self.forecaster.predict_at(positions)?;
        for (_, t) in self.transformers.iter().rev() {
            values = t.inverse_at(positions, &values)?;
        }
        Ok(values)
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        let extended = extend_training(self.train.as_ref(), y_new)?;
        if update_params {
            return self.fit(&extended, None);
        }
        let mut chunk = y_new.clone();
        for (_, t) in &mut self.transformers {
            t.update(&chunk)?;
            chunk = t.transform(&chunk)?;
        }
        self.forecaster.update(&chunk, false)?;
        self.train = Some(extended);
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        self.train.as_ref().map(TimeSeries::end)
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        for (name, t) in &self.transformers {
            nest(&mut p, name, t.get_params());
        }
        nest(&mut p, &self.forecaster_name, self.forecaster.get_params());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        let mut rest = params.clone();
        for (name, t) in &mut self.transformers {
            let (mine, others) = take_nested(&rest, name);
            if !mine.is_empty() {
                t.set_params(&mine)?;
            }
            rest = others;
        }
        let (mine, others) = take_nested(&rest, &self.forecaster_name);
        if let Some(key) = others.keys().next() {
            return Err(Error::UnknownParameter(key.clone()));
        }
        if !mine.is_empty() {
            self.forecaster.set_params(&mine)?;
        }
        self.train = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        if self.train.is_none() {
            return Err(Error::NotFitted);
        }
        let mut p = Params::new();
        for (name, t) in &self.transformers {
            nest(&mut p, name, t.get_fitted_params()?);
        }
        nest(&mut p, &self.forecaster_name, self.forecaster.get_fitted_params()?);
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}
