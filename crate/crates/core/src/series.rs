//! Core data model: equidistant series, relative forecasting horizons and
//! forecasts.
//!
//! Time is purely positional. Observation `i` of a [`TimeSeries`] sits at the
//! absolute index `start + i`; a horizon step `h` resolves to `cutoff + h`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An equidistant, finite, real-valued series with a seasonal periodicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    start: i64,
    sp: usize,
}

impl TimeSeries {
    /// Non-seasonal series starting at index 0.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_start(values, 0, 1)
    }

    pub fn seasonal(values: Vec<f64>, sp: usize) -> Result<Self> {
        Self::with_start(values, 0, sp)
    }

    pub fn with_start(values: Vec<f64>, start: i64, sp: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { needed: 1, got: 0 });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        if sp == 0 {
            return Err(Error::InvalidParameter {
                name: "sp".into(),
                reason: "seasonal periodicity must be positive".into(),
            });
        }
        Ok(Self { values, start, sp })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Absolute index of the last observation.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn sp(&self) -> usize {
        self.sp
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.values.len() as i64).map(move |i| self.start + i)
    }

    /// Value at an absolute index, if inside the series.
    pub fn at(&self, position: i64) -> Option<f64> {
        let offset = position - self.start;
        if offset < 0 {
            return None;
        }
        self.values.get(offset as usize).copied()
    }

    /// Sub-series covering the relative offsets `range` (0-based into
    /// `values`), keeping absolute positions.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.values.len() {
            return Err(Error::SeriesTooShort {
                needed: range.end.max(range.start + 1),
                got: self.values.len(),
            });
        }
        Ok(Self {
            values: self.values[range.clone()].to_vec(),
            start: self.start + range.start as i64,
            sp: self.sp,
        })
    }

    /// Same positions and periodicity, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                left: self.values.len(),
                right: values.len(),
            });
        }
        Self::with_start(values, self.start, self.sp)
    }

    /// Concatenate a contiguous continuation onto this series.
    pub fn append(&self, next: &TimeSeries) -> Result<Self> {
        if next.start != self.end() + 1 {
            return Err(Error::NonContiguousUpdate {
                expected: self.end() + 1,
                got: next.start,
            });
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&next.values);
        Ok(Self {
            values,
            start: self.start,
            sp: self.sp,
        })
    }
}

/// Strictly increasing, nonzero steps relative to a cutoff. Negative steps
/// address in-sample points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForecastingHorizon {
    steps: Vec<i64>,
}

impl ForecastingHorizon {
    pub fn new(steps: Vec<i64>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidHorizon("horizon is empty".into()));
        }
        if steps.contains(&0) {
            return Err(Error::InvalidHorizon("step 0 is not allowed".into()));
        }
        if steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHorizon(
                "steps must be strictly increasing and unique".into(),
            ));
        }
        Ok(Self { steps })
    }

    /// The contiguous horizon `1..=h`.
    pub fn ahead(h: usize) -> Result<Self> {
        Self::new((1..=h as i64).collect())
    }

    pub fn steps(&self) -> &[i64] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn max_step(&self) -> i64 {
        *self.steps.last().expect("horizon is never empty")
    }

    pub fn is_out_of_sample(&self) -> bool {
        self.steps[0] > 0
    }

    /// Absolute indices `cutoff + step`.
    pub fn resolve(&self, cutoff: i64) -> Vec<i64> {
        self.steps.iter().map(|s| cutoff + s).collect()
    }
}

/// Point forecasts, one per horizon step, in horizon order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub horizon: ForecastingHorizon,
    pub values: Vec<f64>,
}

impl Forecast {
    pub fn new(horizon: ForecastingHorizon, values: Vec<f64>) -> Result<Self> {
        if values.len() != horizon.len() {
            return Err(Error::LengthMismatch {
                left: horizon.len(),
                right: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteForecast);
        }
        Ok(Self { horizon, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
