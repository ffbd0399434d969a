//! Simple, Holt (linear trend) and damped-trend exponential smoothing with
//! additive errors.
//!
//! Recursions, with one-step prediction `p_t = l_{t-1} + phi * b_{t-1}`:
//!
//! ```text
//! l_t = alpha * y_t + (1 - alpha) * p_t
//! b_t = beta * (l_t - l_{t-1}) + (1 - beta) * phi * b_{t-1}
//! ```
//!
//! SES is the special case `b == 0`, Holt the case `phi == 1`. Unfixed
//! parameters and the initial states are chosen by minimizing the in-sample
//! one-step sum of squared errors: a coarse grid over the smoothing
//! parameters, then Nelder-Mead over smoothing parameters and initial states
//! from the best grid point.

use serde::{Deserialize, Serialize};

use super::optim::{nelder_mead, smoothing_grid, NelderMeadOptions};
use crate::error::{Error, Result};
use crate::forecaster::{check_known, extend_training, Forecaster};
use crate::params::{invalid, Params};
use crate::series::{ForecastingHorizon, TimeSeries};

/// Bounds applied to an optimized damping factor.
pub const PHI_BOUNDS: (f64, f64) = (0.01, 0.99);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrendKind {
    None,
    Additive,
    Damped,
}

impl TrendKind {
    fn as_str(self) -> &'static str {
        match self {
            TrendKind::None => "none",
            TrendKind::Additive => "additive",
            TrendKind::Damped => "damped",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(TrendKind::None),
            "additive" => Ok(TrendKind::Additive),
            "damped" => Ok(TrendKind::Damped),
            _ => Err(invalid("trend", "expected `none`, `additive` or `damped`")),
        }
    }

    pub fn min_length(self) -> usize {
        match self {
            TrendKind::None => 2,
            TrendKind::Additive | TrendKind::Damped => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingParams {
    pub alpha: f64,
    pub beta: Option<f64>,
    /// Present iff the trend is damped.
    pub phi: Option<f64>,
    pub initial_level: f64,
    pub initial_trend: f64,
}

/// Output of running the recursions over a series.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    /// One-step-ahead predictions, aligned with the input.
    pub fitted: Vec<f64>,
    pub level: f64,
    pub trend: f64,
}

impl SmoothingParams {
    fn damping(&self) -> f64 {
        self.phi.unwrap_or(1.0)
    }

    fn has_trend(&self) -> bool {
        self.beta.is_some()
    }

    /// Advance `(level, trend)` over `values`, pushing one-step predictions.
    fn step_over(&self, mut level: f64, mut trend: f64, values: &[f64], fitted: &mut Vec<f64>) -> (f64, f64) {
        let alpha = self.alpha;
        let phi = self.damping();
        match self.beta {
            None => {
                for &y in values {
                    fitted.push(level);
                    level = alpha * y + (1.0 - alpha) * level;
                }
            }
            Some(beta) => {
                for &y in values {
                    let pred = level + phi * trend;
                    fitted.push(pred);
                    let new_level = alpha * y + (1.0 - alpha) * pred;
                    trend = beta * (new_level - level) + (1.0 - beta) * phi * trend;
                    level = new_level;
                }
            }
        }
        (level, trend)
    }

    pub fn filter(&self, values: &[f64]) -> Filtered {
        let mut fitted = Vec::with_capacity(values.len());
        let trend0 = if self.has_trend() { self.initial_trend } else { 0.0 };
        let (level, trend) = self.step_over(self.initial_level, trend0, values, &mut fitted);
        Filtered {
            fitted,
            level,
            trend,
        }
    }

    /// One-step SSE; stops early (returning a value `> bound`) once the
    /// partial sum exceeds `bound`.
    pub fn sse(&self, values: &[f64], bound: f64) -> f64 {
        let alpha = self.alpha;
        let phi = self.damping();
        let mut level = self.initial_level;
        let mut sse = 0.0;
        match self.beta {
            None => {
                for &y in values {
                    let e = y - level;
                    sse += e * e;
                    if sse > bound {
                        return sse;
                    }
                    level += alpha * e;
                }
            }
            Some(beta) => {
                let mut trend = self.initial_trend;
                for &y in values {
                    let pred = level + phi * trend;
                    let e = y - pred;
                    sse += e * e;
                    if sse > bound {
                        return sse;
                    }
                    let new_level = pred + alpha * e;
                    trend = beta * (new_level - level) + (1.0 - beta) * phi * trend;
                    level = new_level;
                }
            }
        }
        sse
    }

    /// `h`-step forecast from final states.
    pub fn forecast(&self, level: f64, trend: f64, h: i64) -> f64 {
        if !self.has_trend() {
            return level;
        }
        let phi = self.damping();
        let multiplier = if phi == 1.0 {
            h as f64
        } else {
            // phi + phi^2 + ... + phi^h
            phi * (1.0 - phi.powi(h as i32)) / (1.0 - phi)
        };
        level + multiplier * trend
    }
}

/// Parameters the caller pins; `None` means "optimize".
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FixedSmoothing {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub phi: Option<f64>,
}

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Estimate smoothing parameters and initial states for `values`.
pub fn fit_smoothing(values: &[f64], kind: TrendKind, fixed: FixedSmoothing) -> Result<SmoothingParams> {
    let n = values.len();
    let has_trend = kind != TrendKind::None;
    let initial_level = values[0];
    let initial_trend = if has_trend && n > 1 {
        (values[n - 1] - values[0]) / (n - 1) as f64
    } else {
        0.0
    };
    let defaults = SmoothingParams {
        alpha: fixed.alpha.unwrap_or(0.5),
        beta: has_trend.then(|| fixed.beta.unwrap_or(0.1)),
        phi: (kind == TrendKind::Damped).then(|| fixed.phi.unwrap_or(0.98)),
        initial_level,
        initial_trend,
    };

    let free_alpha = fixed.alpha.is_none();
    let free_beta = has_trend && fixed.beta.is_none();
    let free_phi = kind == TrendKind::Damped && fixed.phi.is_none();
    if !(free_alpha || free_beta || free_phi) {
        // Fully specified: standard initial states, nothing to estimate.
        return Ok(defaults);
    }
    if n < kind.min_length() {
        return Err(Error::SeriesTooShort {
            needed: kind.min_length(),
            got: n,
        });
    }

    // Layout of the optimization vector: free smoothing params, then level,
    // then trend (if any).
    let assemble = |x: &[f64]| -> SmoothingParams {
        let mut i = 0;
        let mut next = || {
            let v = x[i];
            i += 1;
            v
        };
        let alpha = if free_alpha { next().clamp(0.0, 1.0) } else { defaults.alpha };
        let beta = if free_beta {
            Some(next().clamp(0.0, 1.0))
        } else {
            defaults.beta
        };
        let phi = if free_phi {
            Some(next().clamp(PHI_BOUNDS.0, PHI_BOUNDS.1))
        } else {
            defaults.phi
        };
        let initial_level = next();
        let initial_trend = if has_trend { next() } else { 0.0 };
        SmoothingParams {
            alpha,
            beta,
            phi,
            initial_level,
            initial_trend,
        }
    };

    // Grid stage over the free smoothing parameters with default initials.
    let grid = smoothing_grid();
    let n_free = [free_alpha, free_beta, free_phi].iter().filter(|&&f| f).count();
    let mut candidates: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..n_free {
        candidates = candidates
            .into_iter()
            .flat_map(|c| {
                grid.iter().map(move |&v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    let mut best_point: Option<Vec<f64>> = None;
    let mut best_sse = f64::INFINITY;
    for mut x in candidates {
        x.push(initial_level);
        if has_trend {
            x.push(initial_trend);
        }
        let sse = assemble(&x).sse(values, best_sse);
        if sse.is_finite() && sse < best_sse {
            best_sse = sse;
            best_point = Some(x);
        }
    }
    let x0 = best_point.ok_or_else(|| Error::OptimizerFailed("no finite objective on the grid".into()))?;

    // Local refinement.
    let scale = {
        let sd = std_dev(values);
        if sd > 0.0 {
            0.1 * sd
        } else {
            1e-3 * initial_level.abs().max(1.0)
        }
    };
    let n_smoothing = x0.len() - 1 - usize::from(has_trend);
    let mut steps = Vec::with_capacity(x0.len());
    for (i, &v) in x0.iter().enumerate() {
        let step = if i < n_smoothing {
            if v + 0.05 > 1.0 {
                -0.05
            } else {
                0.05
            }
        } else if i == n_smoothing {
            scale
        } else {
            (0.1 * initial_trend.abs()).max(scale / n as f64)
        };
        steps.push(step);
    }
    let objective = |x: &[f64]| assemble(x).sse(values, f64::INFINITY);
    let (x, sse) = nelder_mead(objective, &x0, &steps, NelderMeadOptions::default());
    let params = if sse <= best_sse {
        assemble(&x)
    } else {
        assemble(&x0)
    };
    Ok(params)
}

/// Simple exponential smoothing. With `alpha` given, runs the recursion from
/// `l_0 = y_1`; otherwise estimates `alpha` and `l_0`.
pub fn ses_fit(y: &TimeSeries, alpha: Option<f64>) -> Result<SmoothingParams> {
    if let Some(a) = alpha {
        check_unit("alpha", a)?;
    }
    fit_smoothing(
        y.values(),
        TrendKind::None,
        FixedSmoothing {
            alpha,
            ..Default::default()
        },
    )
}

/// Holt (or damped-trend) smoothing with all parameters estimated.
pub fn holt_fit(y: &TimeSeries, damped: bool) -> Result<SmoothingParams> {
    let kind = if damped { TrendKind::Damped } else { TrendKind::Additive };
    fit_smoothing(y.values(), kind, FixedSmoothing::default())
}

/// Forecast `fh` (positive steps) from parameters fitted on `y`.
pub fn holt_predict(params: &SmoothingParams, y: &TimeSeries, fh: &ForecastingHorizon) -> Result<Vec<f64>> {
    if !fh.is_out_of_sample() {
        return Err(Error::InvalidHorizon("expected positive steps".into()));
    }
    let filtered = params.filter(y.values());
    Ok(fh
        .steps()
        .iter()
        .map(|&h| params.forecast(filtered.level, filtered.trend, h))
        .collect())
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(name, "must lie in [0, 1]"))
    }
}

#[derive(Debug, Clone)]
struct EsState {
    params: SmoothingParams,
    filtered: Filtered,
    train: TimeSeries,
}

/// Exponential smoothing forecaster (SES, Holt or damped trend).
#[derive(Debug, Clone)]
pub struct ExponentialSmoothing {
    trend: TrendKind,
    fixed: FixedSmoothing,
    state: Option<EsState>,
}

impl ExponentialSmoothing {
    pub fn new(trend: TrendKind) -> Self {
        Self {
            trend,
            fixed: FixedSmoothing::default(),
            state: None,
        }
    }

    pub fn ses() -> Self {
        Self::new(TrendKind::None)
    }

    pub fn holt() -> Self {
        Self::new(TrendKind::Additive)
    }

    pub fn damped() -> Self {
        Self::new(TrendKind::Damped)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.fixed.alpha = Some(alpha);
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.fixed.beta = Some(beta);
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.fixed.phi = Some(phi);
        self
    }

    pub fn params(&self) -> Option<&SmoothingParams> {
        self.state.as_ref().map(|s| &s.params)
    }

    /// Final `(level, trend)` states.
    pub fn states(&self) -> Option<(f64, f64)> {
        self.state.as_ref().map(|s| (s.filtered.level, s.filtered.trend))
    }

    fn min_length(&self) -> usize {
        let all_fixed = self.fixed.alpha.is_some()
            && (self.trend == TrendKind::None || self.fixed.beta.is_some())
            && (self.trend != TrendKind::Damped || self.fixed.phi.is_some());
        match self.trend {
            TrendKind::None if all_fixed => 1,
            kind => kind.min_length(),
        }
    }

    fn validate_fixed(&self) -> Result<()> {
        if let Some(a) = self.fixed.alpha {
            check_unit("alpha", a)?;
        }
        if let Some(b) = self.fixed.beta {
            check_unit("beta", b)?;
        }
        if let Some(p) = self.fixed.phi {
            if !(p > 0.0 && p <= 1.0) {
                return Err(invalid("phi", "must lie in (0, 1]"));
            }
        }
        Ok(())
    }
}

impl Forecaster for ExponentialSmoothing {
    fn name(&self) -> &str {
        match self.trend {
            TrendKind::None => "SES",
            TrendKind::Additive => "Holt",
            TrendKind::Damped => "Damped",
        }
    }

    fn fit(&mut self, y: &TimeSeries, _fh: Option<&ForecastingHorizon>) -> Result<()> {
        self.state = None;
        self.validate_fixed()?;
        let needed = self.min_length();
        if y.len() < needed {
            return Err(Error::SeriesTooShort { needed, got: y.len() });
        }
        let params = fit_smoothing(y.values(), self.trend, self.fixed)?;
        let filtered = params.filter(y.values());
        self.state = Some(EsState {
            params,
            filtered,
            train: y.clone(),
        });
        Ok(())
    }

    fn predict_at(&self, positions: &[i64]) -> Result<Vec<f64>> {
        let s = self.state.as_ref().ok_or(Error::NotFitted)?;
        let cutoff = s.train.end();
        positions
            .iter()
            .map(|&p| {
                if p > cutoff {
                    Ok(s.params.forecast(s.filtered.level, s.filtered.trend, p - cutoff))
                } else if p >= s.train.start() {
                    Ok(s.filtered.fitted[(p - s.train.start()) as usize])
                } else {
                    Err(Error::UnsupportedInSample { position: p })
                }
            })
            .collect()
    }

    fn update(&mut self, y_new: &TimeSeries, update_params: bool) -> Result<()> {
        let extended = extend_training(self.state.as_ref().map(|s| &s.train), y_new)?;
        if update_params {
            return self.fit(&extended, None);
        }
        let s = self.state.as_mut().ok_or(Error::NotFitted)?;
        let (level, trend) = s
            .params
            .step_over(s.filtered.level, s.filtered.trend, y_new.values(), &mut s.filtered.fitted);
        s.filtered.level = level;
        s.filtered.trend = trend;
        s.train = extended;
        Ok(())
    }

    fn cutoff(&self) -> Option<i64> {
        self.state.as_ref().map(|s| s.train.end())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("trend".into(), self.trend.as_str().into());
        p.insert("alpha".into(), self.fixed.alpha.into());
        p.insert("beta".into(), self.fixed.beta.into());
        p.insert("phi".into(), self.fixed.phi.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["trend", "alpha", "beta", "phi"])?;
        if let Some(v) = params.get("trend") {
            self.trend = TrendKind::parse(v.as_str("trend")?)?;
        }
        if let Some(v) = params.get("alpha") {
            self.fixed.alpha = v.as_opt_f64("alpha")?;
        }
        if let Some(v) = params.get("beta") {
            self.fixed.beta = v.as_opt_f64("beta")?;
        }
        if let Some(v) = params.get("phi") {
            self.fixed.phi = v.as_opt_f64("phi")?;
        }
        self.validate_fixed()?;
        self.state = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let s = self.state.as_ref().ok_or(Error::NotFitted)?;
        let mut p = Params::new();
        p.insert("alpha".into(), s.params.alpha.into());
        p.insert("level".into(), s.filtered.level.into());
        if let Some(beta) = s.params.beta {
            p.insert("beta".into(), beta.into());
            p.insert("trend".into(), s.filtered.trend.into());
        }
        if let Some(phi) = s.params.phi {
            p.insert("phi".into(), phi.into());
        }
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Forecaster> {
        Box::new(self.clone())
    }
}
