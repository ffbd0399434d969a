//! Forecast accuracy metrics and significance tests for model comparison.

mod metrics;
mod ranks;
mod significance;

pub use metrics::{mae, mase, owa, smape, EvalRecord, MaseDenominator};
pub use ranks::{average_ranks, mean_ranks, rank_models, score_table, Metric, RankMatrix};
pub use significance::{
    friedman_test, holm_adjust, nemenyi_cd, nemenyi_groups, nemenyi_q, paired_t_test,
    wilcoxon_signed_rank, CriticalDifference, WilcoxonResult, NEMENYI_MAX_K, WILCOXON_EXACT_MAX_N,
};
