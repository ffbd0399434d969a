use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use super::ranks::{average_ranks, mean_ranks, RankMatrix};
use crate::error::{Error, Result};

/// Two-sided paired t-test on `a - b`. Returns `(t, p)`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::DegenerateInput("paired t-test needs at least two pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("df is positive");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok((t, p))
}

/// Friedman test on a rank matrix. Returns `(chi2_F, p)` with `k - 1`
/// degrees of freedom.
pub fn friedman_test(ranks: &RankMatrix) -> Result<(f64, f64)> {
    let n = ranks.ranks.len();
    let k = ranks.models.len();
    if n < 2 || k < 2 {
        return Err(Error::DegenerateInput(format!(
            "Friedman test needs at least 2 series and 2 models, got {n} and {k}"
        )));
    }
    let r = mean_ranks(ranks);
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = r.iter().map(|v| v * v).sum();
    let chi2 = (12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0)).max(0.0);
    let dist = ChiSquared::new(kf - 1.0).expect("df is positive");
    Ok((chi2, dist.sf(chi2)))
}

/// Critical values `q_alpha` for the Nemenyi test, `k = 2..=30`: upper
/// quantiles of the studentized range with infinite degrees of freedom,
/// divided by `sqrt(2)`. Computed with `scipy.stats.studentized_range`; the
/// first nine entries agree with the standard Nemenyi tables to three decimals.
const Q_05: [f64; 29] = [
    1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878, 3.101730, 3.163684,
    3.218654, 3.268004, 3.312739, 3.353618, 3.391230, 3.426041, 3.458425, 3.488685, 3.517073,
    3.543799, 3.569040, 3.592946, 3.615646, 3.637252, 3.657861, 3.677556, 3.696413, 3.714498,
    3.731869, 3.748578,
];
const Q_10: [f64; 29] = [
    1.644854, 2.052293, 2.291341, 2.459516, 2.588521, 2.692732, 2.779884, 2.854606, 2.919889,
    2.977768, 3.029694, 3.076733, 3.119693, 3.159199, 3.195743, 3.229723, 3.261461, 3.291224,
    3.319233, 3.345676, 3.370712, 3.394477, 3.417089, 3.438651, 3.459253, 3.478971, 3.497878,
    3.516033, 3.533492,
];

pub const NEMENYI_MAX_K: usize = 30;

pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    let table = if alpha == 0.05 {
        &Q_05
    } else if alpha == 0.10 {
        &Q_10
    } else {
        return Err(Error::UnsupportedAlpha(alpha));
    };
    if !(2..=NEMENYI_MAX_K).contains(&k) {
        return Err(Error::DegenerateInput(format!(
            "Nemenyi table covers 2 to {NEMENYI_MAX_K} models, got {k}"
        )));
    }
    Ok(table[k - 2])
}

/// Critical difference of mean ranks for `k` models over `n` series.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    let q = nemenyi_q(k, alpha)?;
    if n == 0 {
        return Err(Error::DegenerateInput("no series".into()));
    }
    let kf = k as f64;
    Ok(q * (kf * (kf + 1.0) / (6.0 * n as f64)).sqrt())
}

/// Maximal runs of the rank-sorted models whose spread stays below `cd`.
/// Returns indices into `mean_ranks`; singleton runs are omitted.
pub fn nemenyi_groups(mean_ranks: &[f64], cd: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..mean_ranks.len()).collect();
    order.sort_by(|&a, &b| mean_ranks[a].total_cmp(&mean_ranks[b]).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last_end = 0;
    for i in 0..order.len() {
        let mut j = i;
        while j + 1 < order.len() && mean_ranks[order[j + 1]] - mean_ranks[order[i]] < cd {
            j += 1;
        }
        if j > i && j + 1 > last_end {
            groups.push(order[i..=j].to_vec());
            last_end = j + 1;
        }
    }
    groups
}

/// Serializable critical-difference diagram data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalDifference {
    pub alpha: f64,
    pub n_series: usize,
    pub cd: f64,
    /// Models sorted by ascending mean rank.
    pub models: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub groups: Vec<Vec<String>>,
}

impl CriticalDifference {
    pub fn from_ranks(ranks: &RankMatrix, alpha: f64) -> Result<Self> {
        let k = ranks.models.len();
        let n = ranks.ranks.len();
        let cd = nemenyi_cd(k, n, alpha)?;
        let r = mean_ranks(ranks);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| r[a].total_cmp(&r[b]).then(a.cmp(&b)));
        let groups = nemenyi_groups(&r, cd)
            .into_iter()
            .map(|g| g.into_iter().map(|i| ranks.models[i].clone()).collect())
            .collect();
        Ok(Self {
            alpha,
            n_series: n,
            cd,
            models: order.iter().map(|&i| ranks.models[i].clone()).collect(),
            mean_ranks: order.iter().map(|&i| r[i]).collect(),
            groups,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Smaller of the positive and negative signed-rank sums.
    pub w: f64,
    pub p: f64,
    /// Number of nonzero differences.
    pub n: usize,
    pub exact: bool,
}

pub const WILCOXON_EXACT_MAX_N: usize = 25;

/// Two-sided Wilcoxon signed-rank test on `a - b`, zero differences
/// dropped. Exact null distribution for `n <= 25` (ties handled by counting
/// on doubled average ranks), normal approximation with tie correction
/// above.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|v| *v != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return Err(Error::AllZeroDifferences);
    }
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks = average_ranks(&abs);
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let total = n as f64 * (n as f64 + 1.0) / 2.0;
    let w = w_plus.min(total - w_plus);
    if n <= WILCOXON_EXACT_MAX_N {
        // Doubled ranks are integers even with ties.
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let max: usize = doubled.iter().sum();
        let mut counts = vec![0f64; max + 1];
        counts[0] = 1.0;
        for &r in &doubled {
            for s in (r..=max).rev() {
                counts[s] += counts[s - r];
            }
        }
        let target = (2.0 * w).round() as usize;
        let tail: f64 = counts[..=target].iter().sum();
        let p = (2.0 * tail / 2f64.powi(n as i32)).min(1.0);
        return Ok(WilcoxonResult { w, p, n, exact: true });
    }
    let nf = n as f64;
    let mut tie_term = 0.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let p = if var <= 0.0 {
        1.0
    } else {
        let z = (w - total / 2.0) / var.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        (2.0 * normal.cdf(z)).min(1.0)
    };
    Ok(WilcoxonResult { w, p, n, exact: false })
}

/// Holm step-down adjustment, returned in input order.
pub fn holm_adjust(pvalues: &[f64]) -> Result<Vec<f64>> {
    if pvalues.is_empty() {
        return Err(Error::DegenerateInput("no p-values".into()));
    }
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));
    let mut out = vec![0.0; m];
    let mut running: f64 = 0.0;
    for (j, &idx) in order.iter().enumerate() {
        let adj = ((m - j) as f64 * pvalues[idx]).min(1.0);
        running = running.max(adj);
        out[idx] = running;
    }
    Ok(out)
}
