//! Model recipes by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tsforecast::compose::{EnsembleForecaster, ReducedRegressionForecaster, TransformedTargetForecaster};
use tsforecast::forecasters::{ExponentialSmoothing, NaiveForecaster, ThetaForecaster};
use tsforecast::regress::{KNeighborsRegressor, LinearRegression, Regressor};
use tsforecast::select::{ForecastingGridSearch, ParamGrid, SlidingWindowSplitter};
use tsforecast::transforms::{BoxCox, Deseasonalizer, Detrender, Standardizer, Transformer};
use tsforecast::{Forecaster, ForecastingHorizon};

use crate::error::{BenchError, Result};

/// Window lengths searched by the tuned recipes.
pub const TUNING_WINDOWS: [usize; 10] = [3, 4, 6, 8, 10, 12, 15, 18, 21, 24];

pub const STATISTICAL_MODELS: [&str; 9] = [
    "Naive", "sNaive", "Naive2", "SES", "Holt", "Damped", "Com", "Theta", "Theta-bc",
];

/// Reduction variants appended to a regressor name, e.g. `KNN-t-s`.
pub const REDUCTION_VARIANTS: [&str; 5] = ["", "-s", "-t-s", "-Theta-bc", "-Theta-bc-t"];

pub const BUILTIN_REGRESSORS: [&str; 2] = ["LR", "KNN"];

/// Name of the final step inside reduction pipelines; tuned recipes search
/// over `"reduce.window_length"`.
pub const REDUCE_STEP: &str = "reduce";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowRule {
    #[default]
    Max,
    Min,
}

impl WindowRule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "max" => Some(Self::Max),
            "min" => Some(Self::Min),
            _ => None,
        }
    }

    pub fn window(self, sp: usize) -> usize {
        match self {
            Self::Max => sp.max(3),
            Self::Min => sp.min(3),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeConfig {
    pub window_rule: WindowRule,
    /// Deseasonalize the input of the boosted Theta-bc recipes before the
    /// residual model sees it.
    pub deseasonalize_residuals: bool,
}

pub type RegressorFactory = Arc<dyn Fn() -> Box<dyn Regressor> + Send + Sync>;

/// Builds forecasters from recipe names. External regressors (e.g. RF,
/// XGB) become available once registered.
#[derive(Clone, Default)]
pub struct Registry {
    pub config: RecipeConfig,
    external: BTreeMap<String, RegressorFactory>,
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("config", &self.config)
            .field("external", &self.external.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Registry {
    pub fn new(config: RecipeConfig) -> Self {
        Self {
            config,
            external: BTreeMap::new(),
        }
    }

    pub fn register_regressor(&mut self, name: impl Into<String>, factory: RegressorFactory) {
        self.external.insert(name.into(), factory);
    }

    /// Every name this registry can build.
    pub fn model_names(&self) -> Vec<String> {
        let mut names: Vec<String> = STATISTICAL_MODELS.iter().map(|s| s.to_string()).collect();
        let regs = BUILTIN_REGRESSORS
            .iter()
            .map(|s| s.to_string())
            .chain(self.external.keys().cloned());
        for r in regs {
            for v in REDUCTION_VARIANTS {
                names.push(format!("{r}{v}"));
            }
        }
        names
    }

    fn regressor(&self, name: &str) -> Option<Box<dyn Regressor>> {
        match name {
            "LR" => Some(Box::new(LinearRegression::new(true))),
            "KNN" => Some(Box::new(KNeighborsRegressor::new(1))),
            other => self.external.get(other).map(|f| f()),
        }
    }

    pub fn build(&self, name: &str, sp: usize, horizon: usize) -> Result<Box<dyn Forecaster>> {
        if let Some(f) = statistical(name, sp) {
            return Ok(f);
        }
        let unknown = || BenchError::UnknownModel(name.to_string());
        let (reg, variant) = name.split_once('-').map_or((name, ""), |(r, v)| (r, v));
        let regressor = self.regressor(reg).ok_or_else(unknown)?;
        let w = self.config.window_rule.window(sp);
        let reduce = Box::new(ReducedRegressionForecaster::new(regressor, w)) as Box<dyn Forecaster>;
        let detrend_scale = || -> Vec<(String, Box<dyn Transformer>)> {
            vec![
                ("detrend".into(), Box::new(Detrender::default())),
                ("standardize".into(), Box::new(Standardizer::new())),
            ]
        };
        let deseasonalize = || -> (String, Box<dyn Transformer>) {
            ("deseasonalize".into(), Box::new(Deseasonalizer::new(sp)))
        };
        let boosted = || -> Vec<(String, Box<dyn Transformer>)> {
            let theta_bc = statistical("Theta-bc", sp).expect("Theta-bc is a builtin recipe");
            let mut steps = Vec::new();
            if self.config.deseasonalize_residuals {
                steps.push(deseasonalize());
            }
            steps.push(("theta_bc".into(), Box::new(Detrender::new(theta_bc)) as Box<dyn Transformer>));
            steps.push(("standardize".into(), Box::new(Standardizer::new())));
            steps
        };
        let model: Box<dyn Forecaster> = match variant {
            "" => pipeline(detrend_scale(), reduce),
            "s" => pipeline(std::iter::once(deseasonalize()).chain(detrend_scale()).collect(), reduce),
            "t-s" => tuned(
                pipeline(std::iter::once(deseasonalize()).chain(detrend_scale()).collect(), reduce),
                horizon,
            )?,
            "Theta-bc" => pipeline(boosted(), reduce),
            "Theta-bc-t" => tuned(pipeline(boosted(), reduce), horizon)?,
            _ => return Err(unknown()),
        };
        Ok(model)
    }
}

fn pipeline(steps: Vec<(String, Box<dyn Transformer>)>, reduce: Box<dyn Forecaster>) -> Box<dyn Forecaster> {
    Box::new(TransformedTargetForecaster::new(steps, REDUCE_STEP, reduce))
}

fn tuned(model: Box<dyn Forecaster>, horizon: usize) -> Result<Box<dyn Forecaster>> {
    let grid = ParamGrid::new([(
        format!("{REDUCE_STEP}.window_length"),
        TUNING_WINDOWS.iter().map(|w| (*w).into()).collect(),
    )])?;
    let cv = SlidingWindowSplitter::single(ForecastingHorizon::ahead(horizon)?);
    Ok(Box::new(ForecastingGridSearch::new(model, grid, cv)))
}

fn seasonal_adjusted(sp: usize, name: &str, f: Box<dyn Forecaster>) -> Box<dyn Forecaster> {
    Box::new(TransformedTargetForecaster::new(
        vec![("deseasonalize".into(), Box::new(Deseasonalizer::new(sp)))],
        name,
        f,
    ))
}

fn statistical(name: &str, sp: usize) -> Option<Box<dyn Forecaster>> {
    let f: Box<dyn Forecaster> = match name {
        "Naive" => Box::new(NaiveForecaster::last()),
        "sNaive" => Box::new(NaiveForecaster::seasonal(sp)),
        "Naive2" => seasonal_adjusted(sp, "naive", Box::new(NaiveForecaster::last())),
        "SES" => seasonal_adjusted(sp, "ses", Box::new(ExponentialSmoothing::ses())),
        "Holt" => seasonal_adjusted(sp, "holt", Box::new(ExponentialSmoothing::holt())),
        "Damped" => seasonal_adjusted(sp, "damped", Box::new(ExponentialSmoothing::damped())),
        "Com" => seasonal_adjusted(
            sp,
            "com",
            Box::new(EnsembleForecaster::new(vec![
                ("ses".into(), Box::new(ExponentialSmoothing::ses())),
                ("holt".into(), Box::new(ExponentialSmoothing::holt())),
                ("damped".into(), Box::new(ExponentialSmoothing::damped())),
            ])),
        ),
        "Theta" => seasonal_adjusted(sp, "theta", Box::new(ThetaForecaster::new())),
        "Theta-bc" => Box::new(TransformedTargetForecaster::new(
            vec![
                ("deseasonalize".into(), Box::new(Deseasonalizer::new(sp))),
                ("boxcox".into(), Box::new(BoxCox::new())),
            ],
            "theta",
            Box::new(ThetaForecaster::new()),
        )),
        _ => return None,
    };
    Some(f)
}

/// Builds `name` with the default recipe configuration and builtin
/// regressors only.
pub fn build_model(name: &str, sp: usize, horizon: usize) -> Result<Box<dyn Forecaster>> {
    Registry::default().build(name, sp, horizon)
}
