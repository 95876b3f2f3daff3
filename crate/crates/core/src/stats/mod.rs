//! Statistical comparison protocol: normality screening with a Lilliefors
//! test (Monte Carlo null table), paired/non-paired test selection, win/loss
//! aggregation and overfitting magnitudes.

mod compare;
mod lilliefors;
mod rank;
mod scores;
mod ttest;

pub use compare::{
    ComparisonResult, Direction, Polarity, Sample, TestKind, compare_paired, compare_unpaired,
};
pub use lilliefors::{
    LillieforsResult, TABLE_MAX_N, TABLE_MIN_N, TABLE_QUANTILES, TABLE_REPLICATES, TABLE_SEED,
    lilliefors_normality, lilliefors_p_value, lilliefors_statistic, null_replicates, quantile_row,
};
pub use rank::{mann_whitney_u, wilcoxon_signed_rank};
pub use scores::{
    MetricKind, OverfitMagnitudes, Verdict, WinLossKey, WinLossTable, aggregate_scores,
    overfit_magnitude,
};
pub use ttest::{paired_t_test, two_sample_t_test};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("sample is degenerate (zero variance)")]
    DegenerateSample,
    #[error("need at least {need} observations, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("samples must have equal length, got {0} and {1}")]
    UnequalLengths(usize, usize),
    #[error("win/loss table is incomplete: missing {0}")]
    IncompleteTable(String),
}
