//! Parametric mean-comparison tests: paired t-test and Welch's two-sample
//! t-test (unequal variances).

use statrs::distribution::{ContinuousCDF, StudentsT};

use super::StatsError;

fn two_sided_t_p(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid dof");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sided paired t-test on the differences `x - y`, with n - 1 degrees
/// of freedom.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::UnequalLengths(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(StatsError::TooFewSamples { need: 2, got: n });
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let (mean, var) = mean_var(&diffs);
    if var <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    let t = mean / (var / n as f64).sqrt();
    Ok(two_sided_t_p(t, (n - 1) as f64))
}

/// Two-sided Welch two-sample t-test with Welch–Satterthwaite degrees of
/// freedom.
pub fn two_sample_t_test(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() < 2 || y.len() < 2 {
        return Err(StatsError::TooFewSamples {
            need: 2,
            got: x.len().min(y.len()),
        });
    }
    let (mx, vx) = mean_var(x);
    let (my, vy) = mean_var(y);
    if vx <= 0.0 && vy <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    let nx = x.len() as f64;
    let ny = y.len() as f64;
    let se2 = vx / nx + vy / ny;
    let t = (mx - my) / se2.sqrt();
    let df = se2 * se2
        / ((vx / nx).powi(2) / (nx - 1.0) + (vy / ny).powi(2) / (ny - 1.0));
    Ok(two_sided_t_p(t, df))
}
