//! Temporal cross-validation and grid-search tuning.

mod splitter;

use std::collections::BTreeMap;

pub use splitter::{SlidingWindowSplitter, Split, SplitMode};

use crate::error::{Error, Result};
use crate::eval::smape;
use crate::forecaster::Forecaster;
use crate::params::{nest, take_nested, ParamValue, Params};
use crate::series::{ForecastingHorizon, TimeSeries};

/// Error function of `(y_true, y_pred)`; lower is better.
pub type Scorer = fn(&[f64], &[f64]) -> Result<f64>;

/// Candidate values per parameter path.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    entries: BTreeMap<String, Vec<ParamValue>>,
}

impl ParamGrid {
    pub fn new<I, K>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, Vec<ParamValue>)>,
        K: Into<String>,
    {
        let entries: BTreeMap<String, Vec<ParamValue>> =
            entries.into_iter().map(|(k, v)| (k.into(), v)).collect();
        if entries.is_empty() || entries.values().any(Vec::is_empty) {
            return Err(Error::InvalidParameter {
                name: "param_grid".into(),
                reason: "grid and every candidate list must be non-empty".into(),
            });
        }
        Ok(Self { entries })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Cartesian product in lexicographic order: keys sorted by name, the
    /// first key varies slowest, values in the order given.
    pub fn candidates(&self) -> Vec<Params> {
        let mut out = vec![Params::new()];
        for (key, values) in &self.entries {
            out = out
                .into_iter()
                .flat_map(|partial| {
                    values.iter().map(move |v| {
                        let mut p = partial.clone();
                        p.insert(key.clone(), v.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Mean validation score of one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub params: Params,
    /// `f64::INFINITY` when the candidate failed on any split.
    pub score: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub candidates: Vec<CandidateScore>,
    pub best_index: usize,
}

impl SearchReport {
    pub fn best_params(&self) -> &Params {
        &self.candidates[self.best_index].params
    }
}

/// Grid-search meta-forecaster: scores every candidate over the splits of
/// `cv`, keeps the lowest mean score (earliest candidate on ties) and refits
/// it on the full series.
#[derive(Debug, Clone)]
pub struct ForecastingGridSearch {
    forecaster: Box<dyn Forecaster>,
    grid: ParamGrid,
    cv: SlidingWindowSplitter,
    scoring: Scorer,
    best: Option<Box<dyn Forecaster>>,
    report: Option<SearchReport>,
}

impl ForecastingGridSearch {
    pub fn new(forecaster: Box<dyn Forecaster>, grid: ParamGrid, cv: SlidingWindowSplitter) -> Self {
        Self {
            forecaster,
            grid,
            cv,
            scoring: smape,
            best: None,
            report: None,
        }
    }

    pub fn with_scoring(mut self, scoring: Scorer) -> Self {
        self.scoring = scoring;
        self
    }

    pub fn report(&self) -> Option<&SearchReport> {
        self.report.as_ref()
    }

    pub fn best_forecaster(&self) -> Option<&dyn Forecaster> {
        self.best.as_deref()
    }

    fn score_candidate(&self, params: &Params, y: &TimeSeries) -> Result<f64> {
        let splits = self.cv.split(y.len());
        if splits.is_empty() {
            return Err(Error::SeriesTooShort {
                needed: self.cv.window_length() + self.cv.fh().max_step().max(1) as usize,
                got: y.len(),
            });
        }
        let mut total = 0.0;
        for split in &splits {
            let mut f = self.forecaster.clone();
            f.set_params(params)?;
            let train = y.slice(split.train.clone())?;
            f.fit(&train, Some(self.cv.fh()))?;
            let positions: Vec<i64> = split.test.iter().map(|&o| y.start() + o as i64).collect();
            let pred = f.predict_at(&positions)?;
            if pred.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteForecast);
            }
            let truth: Vec<f64> = split.test.iter().map(|&o| y.values()[o]).collect();
            total += (self.scoring)(&truth, &pred)?;
        }
        Ok(total / splits.len() as f64)
    }

    fn check_paths(&self) -> Result<()> {
        let first = self.grid.candidates().swap_remove(0);
        let mut probe = self.forecaster.clone();
        match probe.set_params(&first) {
            Err(e @ Error::UnknownParameter(_)) => Err(e),
            _ => Ok(()),
        }
    }
}

impl Forecaster for ForecastingGridSearch {
    fn name(&self) -> &str {
        "ForecastingGridSearch"
    }

    fn fit(&mut self, y: &TimeSeries, fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.best = None;
        self.report = None;
        self.check_paths()?;
        let candidates: Vec<CandidateScore> = self
            .grid
            .candidates()
            .into_iter()
            .map(|params| match self.score_candidate(&params, y) {
                Ok(score) if score.is_finite() => CandidateScore {
                    params,
                    score,
                    error: None,
                },
                Ok(_) => CandidateScore {
                    params,
                    score: f64::INFINITY,
                    error: Some("non-finite score".into()),
                },
                Err(e) => CandidateScore {
                    params,
                    score: f64::INFINITY,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        let mut best_index = None;
        for (i, c) in candidates.iter().enumerate() {
            if c.score.is_finite() && best_index.is_none_or(|b: usize| c.score < candidates[b].score) {
                best_index = Some(i);
            }
        }
        let best_index = best_index.ok_or(Error::AllCandidatesFailed)?;
        let mut best = self.forecaster.clone();
        best.set_params(&candidates[best_index].params)?;
        best.fit(y, fh)?;
        self.best = Some(best);
        self.report = Some(SearchReport {
            candidates,
            best_index,
        });
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        self.best.as_ref().ok_or(Error::NotFitted)?.predict_at(positions)
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        self.best
            .as_mut()
            .ok_or(Error::NotFitted)?
            .update(y_new, update_params)
    }

    fn cutoff(&self) -> Option<i64> {
        self.best.as_ref().and_then(|b| b.cutoff())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        nest(&mut p, "forecaster", self.forecaster.get_params());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        let (inner, rest) = take_nested(params, "forecaster");
        if let Some(key) = rest.keys().next() {
            return Err(Error::UnknownParameter(key.clone()));
        }
        self.forecaster.set_params(&inner)?;
        self.best = None;
        self.report = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let best = self.best.as_ref().ok_or(Error::NotFitted)?;
        let report = self.report.as_ref().ok_or(Error::NotFitted)?;
        let mut p = Params::new();
        nest(&mut p, "best_params", report.best_params().clone());
        p.insert(
            "best_score".into(),
            report.candidates[report.best_index].score.into(),
        );
        nest(&mut p, "best_forecaster", best.get_fitted_params()?);
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecasters::{NaiveForecaster, PolynomialTrendForecaster};
    use crate::params::params;

    #[test]
    fn lexicographic_order() {
        let grid = ParamGrid::new([
            ("b", vec![1i64.into(), 2i64.into()]),
            ("a", vec!["x".into(), "y".into()]),
        ])
        .unwrap();
        let c = grid.candidates();
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], params([("a", ParamValue::from("x")), ("b", 1i64.into())]));
        assert_eq!(c[1], params([("a", ParamValue::from("x")), ("b", 2i64.into())]));
        assert_eq!(c[2], params([("a", ParamValue::from("y")), ("b", 1i64.into())]));
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(ParamGrid::new(Vec::<(String, Vec<ParamValue>)>::new()).is_err());
        assert!(ParamGrid::new([("a", vec![])]).is_err());
    }

    #[test]
    fn single_candidate_equals_plain_fit() {
        let y = TimeSeries::new((0..20).map(|t| (t as f64 * 0.7).sin() + 3.0).collect()).unwrap();
        let grid = ParamGrid::new([("degree", vec![1usize.into()])]).unwrap();
        let cv = SlidingWindowSplitter::single(ForecastingHorizon::ahead(3).unwrap());
        let mut gs = ForecastingGridSearch::new(Box::new(PolynomialTrendForecaster::new(0)), grid, cv);
        gs.fit(&y, None).unwrap();
        let mut plain = PolynomialTrendForecaster::new(1);
        plain.fit(&y, None).unwrap();
        let fh = ForecastingHorizon::ahead(4).unwrap();
        assert_eq!(gs.predict(&fh).unwrap(), plain.predict(&fh).unwrap());
    }

    #[test]
    fn zero_score_candidate_wins() {
        let mut v = vec![5.0; 12];
        v[3] = 1.0;
        let y = TimeSeries::new(v).unwrap();
        let grid = ParamGrid::new([
            ("sp", vec![7usize.into()]),
            ("strategy", vec!["seasonal_last".into(), "last".into()]),
        ])
        .unwrap();
        let cv = SlidingWindowSplitter::single(ForecastingHorizon::ahead(2).unwrap());
        let mut gs = ForecastingGridSearch::new(Box::new(NaiveForecaster::last()), grid, cv);
        gs.fit(&y, None).unwrap();
        let report = gs.report().unwrap();
        assert_eq!(report.best_index, 1);
        assert_eq!(report.candidates[1].score, 0.0);
        assert!(report.candidates[0].score > 0.0);
    }

    #[test]
    fn ties_go_to_first_candidate() {
        let y = TimeSeries::new(vec![5.0; 12]).unwrap();
        let grid = ParamGrid::new([("strategy", vec!["seasonal_last".into(), "last".into()])]).unwrap();
        let cv = SlidingWindowSplitter::new(4, ForecastingHorizon::ahead(2).unwrap());
        let mut gs = ForecastingGridSearch::new(Box::new(NaiveForecaster::seasonal(2)), grid, cv);
        gs.fit(&y, None).unwrap();
        assert_eq!(gs.report().unwrap().best_index, 0);
    }

    #[test]
    fn unknown_path_and_all_failed() {
        let y = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let cv = SlidingWindowSplitter::single(ForecastingHorizon::ahead(1).unwrap());
        let grid = ParamGrid::new([("bogus", vec![1i64.into()])]).unwrap();
        let mut gs = ForecastingGridSearch::new(Box::new(NaiveForecaster::last()), grid, cv.clone());
        assert_eq!(gs.fit(&y, None), Err(Error::UnknownParameter("bogus".into())));
        let grid = ParamGrid::new([("degree", vec![10usize.into()])]).unwrap();
        let mut gs = ForecastingGridSearch::new(Box::new(PolynomialTrendForecaster::new(1)), grid, cv);
        assert_eq!(gs.fit(&y, None), Err(Error::AllCandidatesFailed));
    }
}
