use crate::error::{Error, Result};
use crate::forecaster::{check_known, extend_training, Forecaster};
use crate::params::{invalid, ParamValue, Params};
use crate::series::{Forecast, ForecastingHorizon, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaiveStrategy {
    /// Repeat the last observation.
    Last,
    /// Repeat the last observed value of the same season.
    SeasonalLast,
}

impl NaiveStrategy {
    fn as_str(self) -> &'static str {
        match self {
            NaiveStrategy::Last => "last",
            NaiveStrategy::SeasonalLast => "seasonal_last",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "last" => Ok(NaiveStrategy::Last),
            "seasonal_last" => Ok(NaiveStrategy::SeasonalLast),
            _ => Err(invalid("strategy", "expected `last` or `seasonal_last`")),
        }
    }
}

/// Naive and seasonal-naive forecasts.
///
/// In-sample predictions are lagged values: lag 1 for `Last`, lag `sp` for
/// `SeasonalLast`. The first one (or first `sp`) training points have no
/// prediction.
#[derive(Debug, Clone)]
pub struct NaiveForecaster {
    strategy: NaiveStrategy,
    /// Seasonal periodicity; `None` uses the training series' own `sp`.
    sp: Option<usize>,
    train: Option<TimeSeries>,
}

impl NaiveForecaster {
    pub fn new(strategy: NaiveStrategy) -> Self {
        Self {
            strategy,
            sp: None,
            train: None,
        }
    }

    pub fn last() -> Self {
        Self::new(NaiveStrategy::Last)
    }

    pub fn seasonal(sp: usize) -> Self {
        Self {
            strategy: NaiveStrategy::SeasonalLast,
            sp: Some(sp),
            train: None,
        }
    }

    fn lag(&self, y: &TimeSeries) -> usize {
        match self.strategy {
            NaiveStrategy::Last => 1,
            NaiveStrategy::SeasonalLast => self.sp.unwrap_or(y.sp()),
        }
    }
}

impl Forecaster for NaiveForecaster {
    fn name(&self) -> &str {
        "NaiveForecaster"
    }

    fn fit(&mut self, y: &TimeSeries, _fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.train = None;
        let lag = self.lag(y);
        if lag == 0 {
            return Err(invalid("sp", "must be positive"));
        }
        if y.len() < lag {
            return Err(Error::SeriesTooShort {
                needed: lag,
                got: y.len(),
            });
        }
        self.train = Some(y.clone());
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        let y = self.train.as_ref().ok_or(Error::NotFitted)?;
        let lag = self.lag(y) as i64;
        let values = y.values();
        let n = values.len() as i64;
        let cutoff = y.end();
        positions
            .iter()
            .map(|&p| {
                if p > cutoff {
                    let h = p - cutoff;
                    let idx = n - lag + (h - 1).rem_euclid(lag);
                    Ok(values[idx as usize])
                } else {
                    y.at(p - lag)
                        .filter(|_| p >= y.start())
                        .ok_or(Error::UnsupportedInSample { position: p })
                }
            })
            .collect()
    }

    fn update(&mut self, y_new: &TimeSeries, _update_params: bool) -> Result<()> {
        // No parameters to re-estimate; both paths just extend the buffer.
        let extended = extend_training(self.train.as_ref(), y_new)?;
        self.train = Some(extended);
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        self.train.as_ref().map(TimeSeries::end)
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("strategy".into(), self.strategy.as_str().into());
        p.insert(
            "sp".into(),
            self.sp.map_or(ParamValue::None, |s| ParamValue::Int(s as i64)),
        );
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["strategy", "sp"])?;
        if let Some(v) = params.get("strategy") {
            self.strategy = NaiveStrategy::parse(v.as_str("strategy")?)?;
        }
        if let Some(v) = params.get("sp") {
            self.sp = match v {
                ParamValue::None => None,
                other => Some(other.as_usize("sp")?),
            };
        }
        self.train = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let y = self.train.as_ref().ok_or(Error::NotFitted)?;
        let values = y.values();
        let mut p = Params::new();
        match self.strategy {
            NaiveStrategy::Last => {
                p.insert("last".into(), values[values.len() - 1].into());
            }
            NaiveStrategy::SeasonalLast => {
                let lag = self.lag(y);
                for (i, v) in values[values.len() - lag..].iter().enumerate() {
                    p.insert(format!("season_{i}"), (*v).into());
                }
            }
        }
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}

/// One-shot naive forecast of `y` over `fh`.
pub fn naive_forecast(
    y: &TimeSeries,
    strategy: NaiveStrategy,
    sp: usize,
    fh: &ForecastingHorizon,
) -> Result<Forecast> {
    let mut f = NaiveForecaster {
        strategy,
        sp: Some(sp),
        train: None,
    };
    f.fit(y, None)?;
    f.predict(fh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn last_value_repeated() {
        let y = series(&[2.0, 5.0, 9.0]);
        let fh = ForecastingHorizon::new(vec![1, 5]).unwrap();
        let f = naive_forecast(&y, NaiveStrategy::Last, 1, &fh).unwrap();
        assert_eq!(f.values, vec![9.0, 9.0]);

        let mut m = NaiveForecaster::last();
        m.fit(&y, None).unwrap();
        assert_eq!(m.cutoff(), Some(2));
        assert_eq!(
            m.get_fitted_params().unwrap().get("last"),
            Some(&ParamValue::Float(9.0))
        );
        let f = m.predict(&ForecastingHorizon::ahead(3).unwrap()).unwrap();
        assert_eq!(f.values, vec![9.0, 9.0, 9.0]);
    }

    #[test]
    fn seasonal_last_repeats_season() {
        let y = series(&[1.0, 2.0, 3.0, 4.0]);
        let fh = ForecastingHorizon::ahead(4).unwrap();
        let f = naive_forecast(&y, NaiveStrategy::SeasonalLast, 2, &fh).unwrap();
        assert_eq!(f.values, vec![3.0, 4.0, 3.0, 4.0]);
    }

    #[test]
    fn seasonal_last_too_short() {
        let y = series(&[1.0]);
        let fh = ForecastingHorizon::ahead(1).unwrap();
        assert_eq!(
            naive_forecast(&y, NaiveStrategy::SeasonalLast, 4, &fh),
            Err(Error::SeriesTooShort { needed: 4, got: 1 })
        );
    }

    #[test]
    fn in_sample_lags() {
        let y = series(&[1.0, 2.0, 3.0, 4.0]);
        let mut m = NaiveForecaster::last();
        m.fit(&y, None).unwrap();
        let f = m.predict(&ForecastingHorizon::new(vec![-2, -1]).unwrap()).unwrap();
        assert_eq!(f.values, vec![1.0, 2.0]);
        assert_eq!(
            m.predict(&ForecastingHorizon::new(vec![-3]).unwrap()),
            Err(Error::UnsupportedInSample { position: 0 })
        );
        // The cutoff point itself is reachable by position.
        assert_eq!(m.predict_at(&[3]).unwrap(), vec![3.0]);
    }

    #[test]
    fn update_then_predict() {
        let mut m = NaiveForecaster::last();
        m.fit(&series(&[2.0, 5.0, 9.0]), None).unwrap();
        m.update(&TimeSeries::with_start(vec![4.0], 3, 1).unwrap(), false)
            .unwrap();
        assert_eq!(m.cutoff(), Some(3));
        let f = m.predict(&ForecastingHorizon::ahead(1).unwrap()).unwrap();
        assert_eq!(f.values, vec![4.0]);
        assert_eq!(
            m.update(&TimeSeries::with_start(vec![1.0], 6, 1).unwrap(), false),
            Err(Error::NonContiguousUpdate {
                expected: 4,
                got: 6
            })
        );
    }

    #[test]
    fn unfitted_and_params() {
        let mut m = NaiveForecaster::last();
        assert_eq!(m.get_fitted_params(), Err(Error::NotFitted));
        assert_eq!(
            m.predict(&ForecastingHorizon::ahead(1).unwrap()),
            Err(Error::NotFitted)
        );
        let mut p = Params::new();
        p.insert("bogus".into(), ParamValue::Int(1));
        assert_eq!(
            m.set_params(&p),
            Err(Error::UnknownParameter("bogus".into()))
        );
        let mut p = Params::new();
        p.insert("strategy".into(), "seasonal_last".into());
        p.insert("sp".into(), ParamValue::Int(2));
        m.set_params(&p).unwrap();
        assert_eq!(m.get_params(), p);
    }
}
