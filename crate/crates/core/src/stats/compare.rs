//! Test-selection protocol: normality screening decides between parametric
//! and rank tests, then the verdict direction follows the metric's polarity.

use super::lilliefors::lilliefors_normality;
use super::rank::{mann_whitney_u, wilcoxon_signed_rank};
use super::ttest::{paired_t_test, two_sample_t_test};
use super::StatsError;

/// A labelled vector of per-case metric values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub values: Vec<f64>,
    pub label: String,
}

impl Sample {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Self {
        Sample {
            values,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    PairedT,
    WilcoxonSignedRank,
    TwoSampleT,
    MannWhitneyU,
}

impl TestKind {
    pub fn name(&self) -> &'static str {
        match self {
            TestKind::PairedT => "paired_t",
            TestKind::WilcoxonSignedRank => "wilcoxon_signed_rank",
            TestKind::TwoSampleT => "two_sample_t",
            TestKind::MannWhitneyU => "mann_whitney_u",
        }
    }
}

/// Whether larger metric values are better (DICE) or worse (RAVD/ASSD/MSSD).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    HigherIsBetter,
    LowerIsBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FirstBetter,
    SecondBetter,
    NoDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    pub test_used: TestKind,
    pub p_value: f64,
    pub significant: bool,
    pub direction: Direction,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn verdict(
    x: &Sample,
    y: &Sample,
    test_used: TestKind,
    p_value: f64,
    alpha: f64,
    polarity: Polarity,
) -> ComparisonResult {
    let significant = p_value < alpha;
    let direction = if !significant {
        Direction::NoDifference
    } else {
        let (mx, my) = (mean(&x.values), mean(&y.values));
        let first_better = match polarity {
            Polarity::HigherIsBetter => mx > my,
            Polarity::LowerIsBetter => mx < my,
        };
        if first_better {
            Direction::FirstBetter
        } else {
            Direction::SecondBetter
        }
    };
    ComparisonResult {
        test_used,
        p_value,
        significant,
        direction,
    }
}

/// Paired comparison: Lilliefors on the differences selects paired t
/// (normal) or Wilcoxon signed-rank (not normal). Identical samples
/// short-circuit to a no-difference result.
pub fn compare_paired(
    x: &Sample,
    y: &Sample,
    alpha: f64,
    polarity: Polarity,
) -> Result<ComparisonResult, StatsError> {
    if x.values.len() != y.values.len() {
        return Err(StatsError::UnequalLengths(x.values.len(), y.values.len()));
    }
    let diffs: Vec<f64> = x.values.iter().zip(&y.values).map(|(a, b)| a - b).collect();
    if diffs.iter().all(|d| *d == 0.0) {
        return Ok(ComparisonResult {
            test_used: TestKind::PairedT,
            p_value: 1.0,
            significant: false,
            direction: Direction::NoDifference,
        });
    }
    let normal = lilliefors_normality(&diffs, alpha)?.normal;
    let (test_used, p_value) = if normal {
        (TestKind::PairedT, paired_t_test(&x.values, &y.values)?)
    } else {
        (
            TestKind::WilcoxonSignedRank,
            wilcoxon_signed_rank(&x.values, &y.values)?,
        )
    };
    Ok(verdict(x, y, test_used, p_value, alpha, polarity))
}

/// Non-paired comparison: both samples must pass the normality screen for
/// the two-sample t-test, otherwise Mann–Whitney U.
pub fn compare_unpaired(
    x: &Sample,
    y: &Sample,
    alpha: f64,
    polarity: Polarity,
) -> Result<ComparisonResult, StatsError> {
    if x.values == y.values {
        return Ok(ComparisonResult {
            test_used: TestKind::TwoSampleT,
            p_value: 1.0,
            significant: false,
            direction: Direction::NoDifference,
        });
    }
    let both_normal = lilliefors_normality(&x.values, alpha)?.normal
        && lilliefors_normality(&y.values, alpha)?.normal;
    let (test_used, p_value) = if both_normal {
        (
            TestKind::TwoSampleT,
            two_sample_t_test(&x.values, &y.values)?,
        )
    } else {
        (TestKind::MannWhitneyU, mann_whitney_u(&x.values, &y.values)?)
    };
    Ok(verdict(x, y, test_used, p_value, alpha, polarity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    fn gaussian(n: usize, seed: u64, shift: f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rand_distr::Normal::new(shift, 1.0).unwrap();
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    fn heavy_tailed(n: usize, seed: u64) -> Vec<f64> {
        // ratio of normals has Cauchy-like tails
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rand_distr::Normal::new(0.0, 1.0).unwrap();
        (0..n)
            .map(|_| {
                let a: f64 = d.sample(&mut rng);
                let mut b: f64 = d.sample(&mut rng);
                if b.abs() < 1e-3 {
                    b = 1e-3;
                }
                a / b
            })
            .collect()
    }

    #[test]
    fn paired_selects_t_for_gaussian_differences() {
        let base = gaussian(20, 1, 0.0);
        let noise = gaussian(20, 13, 0.1);
        let x = Sample::new(
            base.iter().zip(&noise).map(|(a, b)| a + b).collect(),
            "x",
        );
        let y = Sample::new(base, "y");
        let res = compare_paired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        assert_eq!(res.test_used, TestKind::PairedT);
    }

    #[test]
    fn paired_selects_wilcoxon_for_heavy_tails() {
        let base = gaussian(20, 3, 0.0);
        let heavy = heavy_tailed(20, 4);
        let x = Sample::new(
            base.iter().zip(&heavy).map(|(a, b)| a + b * 5.0).collect(),
            "x",
        );
        let y = Sample::new(base, "y");
        let res = compare_paired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        assert_eq!(res.test_used, TestKind::WilcoxonSignedRank);
    }

    #[test]
    fn paired_identical_no_difference() {
        let x = Sample::new(vec![1.0, 2.0, 3.0, 4.0, 5.0], "x");
        let res = compare_paired(&x, &x, 0.05, Polarity::HigherIsBetter).unwrap();
        assert_eq!(res.direction, Direction::NoDifference);
        assert!(!res.significant);
    }

    #[test]
    fn unpaired_selects_t_for_gaussians() {
        let x = Sample::new(gaussian(20, 5, 0.0), "x");
        let y = Sample::new(gaussian(20, 6, 0.3), "y");
        let res = compare_unpaired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        assert_eq!(res.test_used, TestKind::TwoSampleT);
    }

    #[test]
    fn unpaired_selects_mwu_for_exponential() {
        use rand::RngExt;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let expo: Vec<f64> = (0..40).map(|_| -rng.random::<f64>().ln() * 3.0).collect();
        let x = Sample::new(expo, "x");
        let y = Sample::new(gaussian(40, 8, 0.0), "y");
        let res = compare_unpaired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        assert_eq!(res.test_used, TestKind::MannWhitneyU);
    }

    #[test]
    fn unpaired_identical_no_difference() {
        let x = Sample::new(vec![1.0, 2.0, 3.0, 4.0, 5.0], "x");
        let res = compare_unpaired(&x, &x, 0.05, Polarity::HigherIsBetter).unwrap();
        assert_eq!(res.direction, Direction::NoDifference);
    }

    #[test]
    fn polarity_flips_direction() {
        // strongly separated gaussian pairs
        let x = Sample::new(gaussian(20, 9, 2.0), "x");
        let y = Sample::new(gaussian(20, 10, 0.0), "y");
        let hi = compare_paired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        let lo = compare_paired(&x, &y, 0.05, Polarity::LowerIsBetter).unwrap();
        assert!(hi.significant && lo.significant);
        assert_eq!(hi.direction, Direction::FirstBetter);
        assert_eq!(lo.direction, Direction::SecondBetter);
    }

    #[test]
    fn p_value_swap_invariant() {
        let x = Sample::new(gaussian(18, 11, 0.5), "x");
        let y = Sample::new(gaussian(18, 12, 0.0), "y");
        let a = compare_paired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        let b = compare_paired(&y, &x, 0.05, Polarity::HigherIsBetter).unwrap();
        assert!((a.p_value - b.p_value).abs() < 1e-12);
        let a = compare_unpaired(&x, &y, 0.05, Polarity::HigherIsBetter).unwrap();
        let b = compare_unpaired(&y, &x, 0.05, Polarity::HigherIsBetter).unwrap();
        assert!((a.p_value - b.p_value).abs() < 1e-12);
    }
}
