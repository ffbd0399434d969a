use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::series::ForecastingHorizon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Fixed-length training windows moved forward by `step_length`.
    Sliding,
    /// Training windows anchored at the series start, growing by `step_length`.
    Expanding,
    /// One split: everything but the last `max(fh)` points trains.
    Single,
}

/// One temporal split. Offsets are 0-based into the split series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Range<usize>,
    pub test: Vec<usize>,
}

/// Temporal cross-validation over a single series.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingWindowSplitter {
    window_length: usize,
    fh: ForecastingHorizon,
    step_length: usize,
    mode: SplitMode,
}

impl SlidingWindowSplitter {
    pub fn new(window_length: usize, fh: ForecastingHorizon) -> Self {
        Self {
            window_length: window_length.max(1),
            fh,
            step_length: 1,
            mode: SplitMode::Sliding,
        }
    }

    pub fn expanding(window_length: usize, fh: ForecastingHorizon) -> Self {
        Self {
            mode: SplitMode::Expanding,
            ..Self::new(window_length, fh)
        }
    }

    /// A single split whose validation window has the length of `fh`'s
    /// furthest step and sits at the series tail.
    pub fn single(fh: ForecastingHorizon) -> Self {
        Self {
            mode: SplitMode::Single,
            ..Self::new(1, fh)
        }
    }

    pub fn with_step_length(mut self, step_length: usize) -> Self {
        self.step_length = step_length.max(1);
        self
    }

    pub fn fh(&self) -> &ForecastingHorizon {
        &self.fh
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn step_length(&self) -> usize {
        self.step_length
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    /// Test offsets for a training window ending (exclusively) at `end`, if
    /// they all fall inside `0..n`.
    fn test_offsets(&self, end: usize, n: usize) -> Option<Vec<usize>> {
        self.fh
            .steps()
            .iter()
            .map(|&s| {
                let p = end as i64 - 1 + s;
                (p >= 0 && (p as usize) < n).then_some(p as usize)
            })
            .collect()
    }

    /// All splits of a series of length `n`, ordered by time. Too-short
    /// series yield no splits.
    pub fn split(&self, n: usize) -> Vec<Split> {
        match self.mode {
            SplitMode::Single => {
                let max = self.fh.max_step();
                if max < 1 || n as i64 <= max {
                    return Vec::new();
                }
                let end = n - max as usize;
                self.test_offsets(end, n)
                    .map(|test| vec![Split { train: 0..end, test }])
                    .unwrap_or_default()
            }
            SplitMode::Sliding | SplitMode::Expanding => {
                let mut out = Vec::new();
                let mut end = self.window_length;
                while end <= n {
                    match self.test_offsets(end, n) {
                        Some(test) => {
                            let start = match self.mode {
                                SplitMode::Sliding => end - self.window_length,
                                _ => 0,
                            };
                            out.push(Split {
                                train: start..end,
                                test,
                            });
                        }
                        None => break,
                    }
                    end += self.step_length;
                }
                out
            }
        }
    }

    /// Cutoffs for dynamic forecasting over a test stretch of length `n`
    /// that follows an already fitted model, expressed as the number of new
    /// observations consumed before each forecast. Sliding and expanding
    /// modes start with no new data and advance by `step_length` while the
    /// whole horizon still fits; single mode yields one cutoff, `max(fh)`
    /// before the end.
    pub fn update_offsets(&self, n: usize) -> Vec<usize> {
        let max = self.fh.max_step().max(0) as usize;
        if n < max {
            return Vec::new();
        }
        match self.mode {
            SplitMode::Single => vec![n - max],
            _ => (0..=n - max).step_by(self.step_length).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sliding_by_hand() {
        let cv = SlidingWindowSplitter::new(3, ForecastingHorizon::ahead(1).unwrap());
        let s = cv.split(5);
        assert_eq!(
            s,
            vec![
                Split { train: 0..3, test: vec![3] },
                Split { train: 1..4, test: vec![4] },
            ]
        );
    }

    #[test]
    fn expanding_grows() {
        let cv = SlidingWindowSplitter::expanding(2, ForecastingHorizon::ahead(1).unwrap());
        let trains: Vec<_> = cv.split(5).into_iter().map(|s| s.train).collect();
        assert_eq!(trains, vec![0..2, 0..3, 0..4]);
    }

    #[test]
    fn single_split_at_tail() {
        let cv = SlidingWindowSplitter::single(ForecastingHorizon::ahead(4).unwrap());
        assert_eq!(
            cv.split(10),
            vec![Split { train: 0..6, test: vec![6, 7, 8, 9] }]
        );
        assert!(cv.split(4).is_empty());
    }

    #[test]
    fn too_short_is_empty() {
        let cv = SlidingWindowSplitter::new(4, ForecastingHorizon::ahead(3).unwrap());
        assert!(cv.split(6).is_empty());
        assert_eq!(cv.split(7).len(), 1);
    }

    #[test]
    fn step_length_skips() {
        let cv = SlidingWindowSplitter::new(2, ForecastingHorizon::ahead(2).unwrap()).with_step_length(2);
        let tests: Vec<_> = cv.split(8).into_iter().map(|s| s.test).collect();
        assert_eq!(tests, vec![vec![2, 3], vec![4, 5], vec![6, 7]]);
    }

    #[test]
    fn update_offsets_shapes() {
        let fh = ForecastingHorizon::ahead(1).unwrap();
        let cv = SlidingWindowSplitter::expanding(1, fh.clone());
        assert_eq!(cv.update_offsets(4), vec![0, 1, 2, 3]);
        let cv = SlidingWindowSplitter::single(ForecastingHorizon::ahead(3).unwrap());
        assert_eq!(cv.update_offsets(5), vec![2]);
        assert!(cv.update_offsets(2).is_empty());
    }
}
