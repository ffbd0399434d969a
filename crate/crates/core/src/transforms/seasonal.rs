use serde::{Deserialize, Serialize};

use super::{check_same_len, Transformer};
use crate::error::{Error, Result};
use crate::forecaster::check_known;
use crate::params::{invalid, Params};
use crate::series::TimeSeries;

/// One-sided 90% normal critical value used by the seasonality test.
pub const SEASONALITY_Z: f64 = 1.645;
/// Full seasonal cycles required before seasonality is tested at all.
pub const DEFAULT_MIN_CYCLES: usize = 3;

/// Sample autocorrelations `r_1..=r_max_lag`. Zero variance, including
/// variance at rounding level relative to the data, gives zeros.
pub fn acf(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    let scale: f64 = values.iter().map(|v| v * v).sum();
    let degenerate = denom <= scale * 1e-24;
    (1..=max_lag)
        .map(|k| {
            if degenerate || k >= n {
                return 0.0;
            }
            dev[..n - k].iter().zip(&dev[k..]).map(|(a, b)| a * b).sum::<f64>() / denom
        })
        .collect()
}

/// Autocorrelation test for seasonality at lag `sp` with the default
/// critical value and cycle requirement.
pub fn seasonality_test(y: &TimeSeries, sp: usize) -> bool {
    seasonality_test_with(y, sp, SEASONALITY_Z, DEFAULT_MIN_CYCLES)
}

/// Seasonal iff `|r_sp| > z * sqrt((1 + 2 * sum_{i<sp} r_i^2) / T)`. Series
/// shorter than `min_cycles * sp`, `sp = 1` and constant series are never
/// seasonal.
pub fn seasonality_test_with(y: &TimeSeries, sp: usize, z: f64, min_cycles: usize) -> bool {
    let n = y.len();
    if sp <= 1 || n < min_cycles.max(1) * sp || n <= sp {
        return false;
    }
    let r = acf(y.values(), sp);
    if r.iter().all(|v| *v == 0.0) {
        return false;
    }
    let sum_sq: f64 = r[..sp - 1].iter().map(|v| v * v).sum();
    let limit = z * ((1.0 + 2.0 * sum_sq) / n as f64).sqrt();
    r[sp - 1].abs() > limit
}

/// Multiplicative seasonal figure aligned to absolute positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalIndices {
    pub indices: Vec<f64>,
    /// Position that receives `indices[0]` (the training start).
    pub phase: i64,
    pub sp: usize,
    /// False when the seasonality test failed; the transform is then the
    /// identity.
    pub applied: bool,
}

impl SeasonalIndices {
    pub fn identity(sp: usize, phase: i64) -> Self {
        Self {
            indices: vec![1.0; sp.max(1)],
            phase,
            sp: sp.max(1),
            applied: false,
        }
    }

    pub fn at(&self, position: i64) -> f64 {
        if !self.applied {
            return 1.0;
        }
        self.indices[(position - self.phase).rem_euclid(self.sp as i64) as usize]
    }
}

/// Classical multiplicative decomposition: a centered moving average of
/// length `sp` (a 2 x sp average for even `sp`) estimates the trend, the
/// ratios to trend are averaged per season position counted from the series
/// start, and the figure is normalized to mean 1.
pub fn classical_decompose(y: &TimeSeries, sp: usize) -> Result<SeasonalIndices> {
    let v = y.values();
    let n = v.len();
    let sp = sp.max(1);
    if n < 2 * sp {
        return Err(Error::SeriesTooShort {
            needed: 2 * sp,
            got: n,
        });
    }
    if v.iter().any(|x| *x <= 0.0) {
        return Err(Error::NonPositiveValues);
    }
    if sp == 1 {
        return Ok(SeasonalIndices {
            indices: vec![1.0],
            phase: y.start(),
            sp,
            applied: true,
        });
    }
    let weights: Vec<f64> = if sp % 2 == 0 {
        let mut w = vec![1.0 / sp as f64; sp + 1];
        w[0] = 0.5 / sp as f64;
        w[sp] = 0.5 / sp as f64;
        w
    } else {
        vec![1.0 / sp as f64; sp]
    };
    let half = weights.len() / 2;
    let mut sums = vec![0.0; sp];
    let mut counts = vec![0usize; sp];
    for t in half..n - half {
        let trend: f64 = weights
            .iter()
            .zip(&v[t - half..=t + half])
            .map(|(w, x)| w * x)
            .sum();
        sums[t % sp] += v[t] / trend;
        counts[t % sp] += 1;
    }
    let mut figure: Vec<f64> = sums.iter().zip(&counts).map(|(s, c)| s / *c as f64).collect();
    let mean = figure.iter().sum::<f64>() / sp as f64;
    for f in &mut figure {
        *f /= mean;
    }
    Ok(SeasonalIndices {
        indices: figure,
        phase: y.start(),
        sp,
        applied: true,
    })
}

/// Conditional multiplicative seasonal adjustment: decompose only when the
/// seasonality test passes.
#[derive(Debug, Clone)]
pub struct Deseasonalizer {
    /// Periodicity; `None` takes the series' own.
    sp: Option<usize>,
    z: f64,
    min_cycles: usize,
    state: Option<SeasonalIndices>,
}

impl Default for Deseasonalizer {
    fn default() -> Self {
        Self {
            sp: None,
            z: SEASONALITY_Z,
            min_cycles: DEFAULT_MIN_CYCLES,
            state: None,
        }
    }
}

impl Deseasonalizer {
    pub fn new(sp: usize) -> Self {
        Self {
            sp: Some(sp),
            ..Self::default()
        }
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    pub fn with_min_cycles(mut self, min_cycles: usize) -> Self {
        self.min_cycles = min_cycles;
        self
    }

    pub fn indices(&self) -> Option<&SeasonalIndices> {
        self.state.as_ref()
    }

    fn state(&self) -> Result<&SeasonalIndices> {
        self.state.as_ref().ok_or(Error::NotFitted)
    }
}

impl Transformer for Deseasonalizer {
    fn name(&self) -> &str {
        "Deseasonalizer"
    }

    fn fit(&mut self, y: &TimeSeries) -> Result<()> {
        self.state = None;
        let sp = self.sp.unwrap_or(y.sp());
        if sp == 0 {
            return Err(invalid("sp", "must be positive"));
        }
        self.state = Some(if seasonality_test_with(y, sp, self.z, self.min_cycles) {
            classical_decompose(y, sp)?
        } else {
            SeasonalIndices::identity(sp, y.start())
        });
        Ok(())
    }

    fn transform_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let s = self.state()?;
        Ok(positions.iter().zip(values).map(|(p, v)| v / s.at(*p)).collect())
    }

    fn inverse_at(&self, positions: &[i64], values: &[f64]) -> Result<Vec<f64>> {
        check_same_len(positions, values)?;
        let s = self.state()?;
        Ok(positions.iter().zip(values).map(|(p, v)| v * s.at(*p)).collect())
    }

    fn get_params(&self) -> Params {
        let mut p = Params::new();
        p.insert("sp".into(), self.sp.map_or(crate::params::ParamValue::None, Into::into));
        p.insert("z".into(), self.z.into());
        p.insert("min_cycles".into(), self.min_cycles.into());
        p
    }

    fn set_params(&mut self, params: &Params) -> Result<()> {
        check_known(params, &["sp", "z", "min_cycles"])?;
        if let Some(v) = params.get("sp") {
            self.sp = match v {
                crate::params::ParamValue::None => None,
                other => Some(other.as_usize("sp")?),
            };
        }
        if let Some(v) = params.get("z") {
            self.z = v.as_f64("z")?;
        }
        if let Some(v) = params.get("min_cycles") {
            self.min_cycles = v.as_usize("min_cycles")?;
        }
        self.state = None;
        Ok(())
    }

    fn get_fitted_params(&self) -> Result<Params> {
        let s = self.state()?;
        let mut p = Params::new();
        p.insert("applied".into(), s.applied.into());
        p.insert("phase".into(), s.phase.into());
        for (i, v) in s.indices.iter().enumerate() {
            p.insert(format!("index_{i}"), (*v).into());
        }
        Ok(p)
    }

    fn clone_box(&self) -> Box<dyn Transformer> {
        Box::new(self.clone())
    }
}
