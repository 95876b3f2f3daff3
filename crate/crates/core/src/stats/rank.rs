//! Nonparametric rank tests: Wilcoxon signed-rank (paired) and
//! Mann–Whitney U (unpaired). Exact distributions are used where feasible
//! (signed-rank up to n = 12 after dropping zero differences; Mann–Whitney
//! while `n * m <= 400` and there are no ties), otherwise the normal
//! approximation with tie and continuity corrections.

use statrs::distribution::{ContinuousCDF, Normal};

use super::StatsError;

/// Midranks of `values`, ties sharing the average rank. Returned in the
/// input order, scaled by 2 so every rank is an integer.
fn double_midranks(values: &[f64]) -> Vec<u64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0u64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share the average; doubled it is (i + j + 2)
        let doubled = (i + j + 2) as u64;
        for &idx in &order[i..=j] {
            out[idx] = doubled;
        }
        i = j + 1;
    }
    out
}

/// Sum of `t^3 - t` over tie groups.
fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        term += t * t * t - t;
        i = j + 1;
    }
    term
}

/// Two-sided Wilcoxon signed-rank p-value for zero median of `x - y`.
///
/// Zero differences are dropped. At least 5 nonzero differences are
/// required. Exact sign-pattern enumeration for n <= 12, normal
/// approximation with tie and continuity corrections above.
pub fn wilcoxon_signed_rank(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::UnequalLengths(x.len(), y.len()));
    }
    let diffs: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .filter(|d| *d != 0.0)
        .collect();
    if x.iter().zip(y).all(|(a, b)| a == b) {
        return Err(StatsError::DegenerateSample);
    }
    let n = diffs.len();
    if n < 5 {
        return Err(StatsError::TooFewSamples { need: 5, got: n });
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks2 = double_midranks(&abs);
    let w2_plus: u64 = diffs
        .iter()
        .zip(&ranks2)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, &r)| r)
        .sum();

    if n <= 12 {
        // Enumerate all 2^n sign assignments of the (fixed) ranks.
        let total = 1u64 << n;
        let mut le = 0u64;
        let mut ge = 0u64;
        for pattern in 0..total {
            let w: u64 = (0..n)
                .filter(|i| pattern & (1 << i) != 0)
                .map(|i| ranks2[i])
                .sum();
            if w <= w2_plus {
                le += 1;
            }
            if w >= w2_plus {
                ge += 1;
            }
        }
        let p = 2.0 * (le.min(ge) as f64) / total as f64;
        Ok(p.min(1.0))
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&abs) / 48.0;
        if var <= 0.0 {
            return Err(StatsError::DegenerateSample);
        }
        let w = w2_plus as f64 / 2.0;
        // continuity correction toward the mean
        let z = (w - mean).abs().max(0.5) - 0.5;
        let z = z / var.sqrt();
        let normal = Normal::new(0.0, 1.0).unwrap();
        Ok((2.0 * (1.0 - normal.cdf(z))).min(1.0))
    }
}

/// Exact Mann–Whitney null distribution: `counts[u]` = number of
/// arrangements with U statistic equal to `u`, for sample sizes n and m.
fn mwu_exact_counts(n: usize, m: usize) -> Vec<f64> {
    // dp[i][j][u] = number of rank arrangements of i x-values among j
    // y-values with U = u: dp[i][j][u] = dp[i-1][j][u-j] + dp[i][j-1][u]
    let umax = n * m;
    let mut dp = vec![vec![vec![0.0f64; umax + 1]; m + 1]; n + 1];
    dp[0][0][0] = 1.0;
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            for u in 0..=i * j {
                let mut c = 0.0;
                if i > 0 && u >= j {
                    c += dp[i - 1][j][u - j];
                }
                if j > 0 {
                    c += dp[i][j - 1][u];
                }
                dp[i][j][u] = c;
            }
        }
    }
    dp[n][m].clone()
}

/// Two-sided Mann–Whitney U (Wilcoxon rank-sum) p-value.
///
/// Exact while `n * m <= 400` and the pooled sample has no ties; normal
/// approximation with tie and continuity corrections otherwise.
pub fn mann_whitney_u(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    let n = x.len();
    let m = y.len();
    if n < 3 || m < 3 {
        return Err(StatsError::TooFewSamples { need: 3, got: n.min(m) });
    }
    let mut pooled: Vec<f64> = Vec::with_capacity(n + m);
    pooled.extend_from_slice(x);
    pooled.extend_from_slice(y);
    let ranks2 = double_midranks(&pooled);
    let r1_2: u64 = ranks2[..n].iter().sum();
    let r1 = r1_2 as f64 / 2.0;
    let u1 = r1 - (n * (n + 1)) as f64 / 2.0;

    let has_ties = {
        let mut s = pooled.clone();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s.windows(2).any(|w| w[0] == w[1])
    };

    if n * m <= 400 && !has_ties {
        let u = u1.round() as usize;
        let counts = mwu_exact_counts(n, m);
        let total: f64 = counts.iter().sum();
        let le: f64 = counts[..=u].iter().sum();
        let ge: f64 = counts[u..].iter().sum();
        Ok((2.0 * le.min(ge) / total).min(1.0))
    } else {
        let nf = n as f64;
        let mf = m as f64;
        let nt = nf + mf;
        let var = nf * mf / 12.0 * ((nt + 1.0) - tie_term(&pooled) / (nt * (nt - 1.0)));
        if var <= 0.0 {
            return Err(StatsError::DegenerateSample);
        }
        let mean = nf * mf / 2.0;
        let z = ((u1 - mean).abs().max(0.5) - 0.5) / var.sqrt();
        let normal = Normal::new(0.0, 1.0).unwrap();
        Ok((2.0 * (1.0 - normal.cdf(z))).min(1.0))
    }
}
