//! The four per-case evaluation metrics: DICE, RAVD (percent), ASSD and
//! MSSD (both in mm, exact voxel-centre surface distances).

use rayon::prelude::*;
use thiserror::Error;

use crate::spatial::KdTree;
use crate::volume::{BinaryMask, VolumeError, border_voxels, cardinality};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error("both masks are empty")]
    BothEmpty,
    #[error("ground-truth mask is empty")]
    EmptyGroundTruth,
    #[error("candidate segmentation is empty")]
    EmptySegmentation,
}

/// The four metric values for one case.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricSet {
    pub dice: f64,
    pub ravd_percent: f64,
    pub assd_mm: f64,
    pub mssd_mm: f64,
}

/// `evaluate_case` output: the bundled metrics plus a flag marking cases
/// where the candidate was empty and worst-case sentinels were substituted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseEvaluation {
    pub metrics: MetricSet,
    pub degenerate: bool,
}

/// Directed nearest-border distances in mm, one entry per border voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDistanceResult {
    pub dists_x_to_y: Vec<f64>,
    pub dists_y_to_x: Vec<f64>,
}

pub fn dice(x: &BinaryMask, y: &BinaryMask) -> Result<f64, MetricError> {
    x.meta.check_compatible(&y.meta)?;
    let nx = cardinality(x);
    let ny = cardinality(y);
    if nx + ny == 0 {
        return Err(MetricError::BothEmpty);
    }
    let inter = x
        .labels
        .iter()
        .zip(&y.labels)
        .filter(|&(&a, &b)| a == 1 && b == 1)
        .count();
    Ok(2.0 * inter as f64 / (nx + ny) as f64)
}

/// Relative absolute volume difference in percent: `100 * |X - Y| / |Y|`.
pub fn ravd(x: &BinaryMask, y: &BinaryMask) -> Result<f64, MetricError> {
    x.meta.check_compatible(&y.meta)?;
    let nx = cardinality(x) as f64;
    let ny = cardinality(y) as f64;
    if ny == 0.0 {
        return Err(MetricError::EmptyGroundTruth);
    }
    Ok(100.0 * (nx - ny).abs() / ny)
}

/// Exact directed nearest-neighbour distances between the two border voxel
/// sets, in world coordinates (voxel centre to voxel centre).
pub fn surface_distances(
    x: &BinaryMask,
    y: &BinaryMask,
) -> Result<SurfaceDistanceResult, MetricError> {
    x.meta.check_compatible(&y.meta)?;
    let bx = border_voxels(x);
    let by = border_voxels(y);
    if bx.is_empty() || by.is_empty() {
        return Err(MetricError::EmptySegmentation);
    }
    let px: Vec<[f64; 3]> = bx
        .iter()
        .map(|&(i, j, k)| x.meta.world_point(i, j, k))
        .collect();
    let py: Vec<[f64; 3]> = by
        .iter()
        .map(|&(i, j, k)| y.meta.world_point(i, j, k))
        .collect();
    let (dists_x_to_y, dists_y_to_x) = rayon::join(
        || {
            let tree = KdTree::build(py.clone());
            px.par_iter().map(|&p| tree.nearest(p)).collect()
        },
        || {
            let tree = KdTree::build(px.clone());
            py.par_iter().map(|&p| tree.nearest(p)).collect()
        },
    );
    Ok(SurfaceDistanceResult {
        dists_x_to_y,
        dists_y_to_x,
    })
}

/// Average symmetric surface distance: mean over the union of both directed
/// distance lists.
pub fn assd(x: &BinaryMask, y: &BinaryMask) -> Result<f64, MetricError> {
    let sd = surface_distances(x, y)?;
    Ok(symmetric_mean(&sd))
}

/// Maximum symmetric surface distance.
pub fn mssd(x: &BinaryMask, y: &BinaryMask) -> Result<f64, MetricError> {
    let sd = surface_distances(x, y)?;
    Ok(symmetric_max(&sd))
}

fn symmetric_mean(sd: &SurfaceDistanceResult) -> f64 {
    let n = sd.dists_x_to_y.len() + sd.dists_y_to_x.len();
    let s: f64 = sd.dists_x_to_y.iter().chain(&sd.dists_y_to_x).sum();
    s / n as f64
}

fn symmetric_max(sd: &SurfaceDistanceResult) -> f64 {
    sd.dists_x_to_y
        .iter()
        .chain(&sd.dists_y_to_x)
        .cloned()
        .fold(0.0, f64::max)
}

/// All four metrics for one candidate/truth pair.
///
/// An empty candidate does not abort the pipeline: it reports dice 0,
/// RAVD 100% and the grid world-diagonal as a worst-case sentinel for both
/// surface distances, with `degenerate` set.
pub fn evaluate_case(
    candidate: &BinaryMask,
    truth: &BinaryMask,
) -> Result<CaseEvaluation, MetricError> {
    candidate.meta.check_compatible(&truth.meta)?;
    if cardinality(truth) == 0 {
        return Err(MetricError::EmptyGroundTruth);
    }
    if cardinality(candidate) == 0 {
        let sentinel = truth.meta.world_diagonal();
        return Ok(CaseEvaluation {
            metrics: MetricSet {
                dice: 0.0,
                ravd_percent: 100.0,
                assd_mm: sentinel,
                mssd_mm: sentinel,
            },
            degenerate: true,
        });
    }
    let sd = surface_distances(candidate, truth)?;
    Ok(CaseEvaluation {
        metrics: MetricSet {
            dice: dice(candidate, truth)?,
            ravd_percent: ravd(candidate, truth)?,
            assd_mm: symmetric_mean(&sd),
            mssd_mm: symmetric_max(&sd),
        },
        degenerate: false,
    })
}
