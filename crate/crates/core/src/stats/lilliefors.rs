//! Lilliefors goodness-of-fit test for normality with unknown mean and
//! variance. Critical values come from a precomputed Monte Carlo null table
//! (seeded, 10^5 replicates per sample size) shipped with the crate; the
//! observed statistic is turned into a p-value by interpolating the stored
//! null quantiles.
//!
//! Table layout (`data/lilliefors_null.tsv`): comment header lines starting
//! with `#` record the version, seed and replicate count; each data line is
//! `n q_1 ... q_999` where `q_i` is the empirical `i/1000` quantile of the
//! null statistic for sample size `n`. Sizes 4..=50 are tabulated; larger
//! sizes reuse the n = 50 row rescaled by `sqrt(50 / n)`.

use statrs::distribution::{ContinuousCDF, Normal};
use std::sync::OnceLock;

use super::StatsError;

/// Sample sizes covered by the shipped null table.
pub const TABLE_MIN_N: usize = 4;
pub const TABLE_MAX_N: usize = 50;
/// Quantile grid: probabilities `i / 1000` for `i` in `1..=999`.
pub const TABLE_QUANTILES: usize = 999;
/// Monte Carlo replicates per sample size used to build the table.
pub const TABLE_REPLICATES: usize = 100_000;
/// Base seed for the table generator; each `n` uses a stream derived from it.
pub const TABLE_SEED: u64 = 20260823;

static TABLE_TEXT: &str = include_str!("../../data/lilliefors_null.tsv");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LillieforsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub normal: bool,
}

struct NullTable {
    // rows[n - TABLE_MIN_N] = sorted quantiles
    rows: Vec<Vec<f64>>,
}

fn table() -> &'static NullTable {
    static TABLE: OnceLock<NullTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows = vec![Vec::new(); TABLE_MAX_N - TABLE_MIN_N + 1];
        for line in TABLE_TEXT.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let n: usize = it.next().expect("row n").parse().expect("row n");
            let qs: Vec<f64> = it.map(|t| t.parse().expect("quantile")).collect();
            assert_eq!(qs.len(), TABLE_QUANTILES, "bad null-table row for n={n}");
            rows[n - TABLE_MIN_N] = qs;
        }
        assert!(
            rows.iter().all(|r| !r.is_empty()),
            "null table is missing sample sizes"
        );
        NullTable { rows }
    })
}

/// Sup-norm distance between the sample's empirical CDF and the normal CDF
/// parameterised by the sample mean and (n-1) standard deviation.
pub fn lilliefors_statistic(values: &[f64]) -> Result<f64, StatsError> {
    let n = values.len();
    if n < TABLE_MIN_N {
        return Err(StatsError::TooFewSamples {
            need: TABLE_MIN_N,
            got: n,
        });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    let sd = var.sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let std_normal = Normal::new(0.0, 1.0).unwrap();
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = std_normal.cdf((x - mean) / sd);
        let upper = (i + 1) as f64 / nf - f;
        let lower = f - i as f64 / nf;
        d = d.max(upper).max(lower);
    }
    Ok(d)
}

/// Monte Carlo p-value for an observed statistic at sample size `n`.
pub fn lilliefors_p_value(statistic: f64, n: usize) -> Result<f64, StatsError> {
    if n < TABLE_MIN_N {
        return Err(StatsError::TooFewSamples {
            need: TABLE_MIN_N,
            got: n,
        });
    }
    let (row, scale) = if n <= TABLE_MAX_N {
        (&table().rows[n - TABLE_MIN_N], 1.0)
    } else {
        // Kolmogorov statistics shrink roughly as 1/sqrt(n).
        (
            &table().rows[TABLE_MAX_N - TABLE_MIN_N],
            (TABLE_MAX_N as f64 / n as f64).sqrt(),
        )
    };
    let d = statistic / scale;
    // F(d) by linear interpolation on the quantile grid; p = 1 - F(d).
    let cdf = if d <= row[0] {
        0.001 * (d / row[0]).clamp(0.0, 1.0)
    } else if d >= row[TABLE_QUANTILES - 1] {
        0.9995
    } else {
        let idx = row.partition_point(|&q| q < d);
        let (q0, q1) = (row[idx - 1], row[idx]);
        let frac = if q1 > q0 { (d - q0) / (q1 - q0) } else { 0.0 };
        0.001 * (idx as f64 + frac)
    };
    Ok((1.0 - cdf).clamp(0.0, 1.0))
}

/// Run the full test: statistic, Monte Carlo p-value, and the decision
/// `normal = (p >= alpha)`.
pub fn lilliefors_normality(values: &[f64], alpha: f64) -> Result<LillieforsResult, StatsError> {
    let statistic = lilliefors_statistic(values)?;
    let p_value = lilliefors_p_value(statistic, values.len())?;
    Ok(LillieforsResult {
        statistic,
        p_value,
        normal: p_value >= alpha,
    })
}

/// One Monte Carlo replicate stream for the null table: the statistic of a
/// standard-normal sample of size `n`. Exposed so the generator example and
/// oracle tests reproduce the table bit-exactly from the recorded seed.
pub fn null_replicates(n: usize, replicates: usize, base_seed: u64) -> Vec<f64> {
    use rand::SeedableRng;
    use rand_distr::Distribution;
    let mut rng =
        rand_chacha::ChaCha8Rng::seed_from_u64(base_seed ^ (n as u64).wrapping_mul(0x9E3779B97F4A7C15));
    let dist = rand_distr::StandardNormal;
    let mut out = Vec::with_capacity(replicates);
    let mut buf = vec![0.0f64; n];
    for _ in 0..replicates {
        for b in buf.iter_mut() {
            *b = dist.sample(&mut rng);
        }
        out.push(lilliefors_statistic(&buf).expect("normal sample is non-degenerate"));
    }
    out
}

/// Quantile grid extracted from a set of null replicates, as stored in the
/// table file.
pub fn quantile_row(mut stats: Vec<f64>) -> Vec<f64> {
    stats.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let r = stats.len();
    (1..=TABLE_QUANTILES)
        .map(|i| {
            let rank = ((i as f64 / 1000.0) * r as f64).ceil() as usize;
            stats[rank.saturating_sub(1)]
        })
        .collect()
}
