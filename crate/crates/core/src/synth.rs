//! Deterministic synthetic data: ellipsoid phantoms as ground truth and
//! simulated segmenter probability maps, so the full pipeline runs without
//! clinical data. Every stochastic operation takes an explicit seed; there
//! is no global RNG state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use thiserror::Error;

use crate::spatial::KdTree;
use crate::volume::{
    BinaryMask, GridMeta, ScalarVolume, border_voxels, outer_border_voxels, smooth_box3,
};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("phantom contains no foreground voxel")]
    EmptyPhantom,
    #[error("ground-truth mask is empty")]
    EmptyTruth,
}

/// An ellipsoid in world space: centre given in (fractional) voxel
/// coordinates, semi-axes in mm.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Ellipsoid {
    pub center_voxels: (f64, f64, f64),
    pub semi_axes_mm: (f64, f64, f64),
}

/// Ground-truth phantom: a union of ellipsoids on a given grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhantomSpec {
    pub grid: GridMeta,
    pub shapes: Vec<Ellipsoid>,
    pub seed: u64,
}

/// Behavioural knobs of one simulated segmenter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SegmenterProfile {
    /// Applications of the 3x3x3 box smoothing to the probability map.
    pub blur_passes: u32,
    /// Boundary shift in mm; positive dilates, negative erodes.
    pub boundary_bias_mm: f64,
    /// Additive Gaussian noise on probabilities, clamped back to [0, 1].
    pub noise_sigma: f64,
    /// Width of the logistic probability ramp across the boundary, in mm.
    /// Smaller values make the segmenter more confident.
    pub temperature: f64,
}

/// Voxel is foreground iff its world-space centre lies strictly inside any
/// of the spec's ellipsoids.
pub fn make_phantom(spec: &PhantomSpec) -> Result<BinaryMask, SynthError> {
    let meta = spec.grid;
    let (nx, ny, nz) = meta.dims;
    let mut labels = vec![0u8; meta.voxel_count()];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let w = meta.world_point(i, j, k);
                let inside = spec.shapes.iter().any(|e| {
                    let cx = e.center_voxels.0 * meta.spacing.0;
                    let cy = e.center_voxels.1 * meta.spacing.1;
                    let cz = e.center_voxels.2 * meta.spacing.2;
                    let q = ((w[0] - cx) / e.semi_axes_mm.0).powi(2)
                        + ((w[1] - cy) / e.semi_axes_mm.1).powi(2)
                        + ((w[2] - cz) / e.semi_axes_mm.2).powi(2);
                    q < 1.0
                });
                if inside {
                    labels[meta.linear_index(i, j, k)] = 1;
                }
            }
        }
    }
    if labels.iter().all(|&l| l == 0) {
        return Err(SynthError::EmptyPhantom);
    }
    Ok(BinaryMask { meta, labels })
}

/// Signed world-space ramp from the truth boundary: positive inside the
/// foreground (distance to the nearest outer-shell background voxel),
/// negative outside (minus the distance to the nearest foreground border
/// voxel). Every foreground voxel gets a strictly positive value, so a
/// zero-bias, zero-noise segmenter thresholded at 0.5 recovers the truth
/// exactly.
fn signed_ramp(truth: &BinaryMask) -> Vec<f64> {
    let meta = truth.meta;
    let inner: Vec<[f64; 3]> = border_voxels(truth)
        .iter()
        .map(|&(i, j, k)| meta.world_point(i, j, k))
        .collect();
    let outer: Vec<[f64; 3]> = outer_border_voxels(truth)
        .iter()
        .map(|&(i, j, k)| meta.world_point(i, j, k))
        .collect();
    let inner_tree = KdTree::build(inner);
    // A full-grid foreground has no outer shell; every voxel is then deep
    // inside and gets the grid diagonal as its ramp value.
    let outer_tree = if outer.is_empty() {
        None
    } else {
        Some(KdTree::build(outer))
    };
    let (nx, ny, nz) = meta.dims;
    let mut ramp = Vec::with_capacity(meta.voxel_count());
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let w = meta.world_point(i, j, k);
                let v = if truth.get(i, j, k) == 1 {
                    match &outer_tree {
                        Some(t) => t.nearest(w),
                        None => meta.world_diagonal().max(1.0),
                    }
                } else {
                    -inner_tree.nearest(w)
                };
                ramp.push(v);
            }
        }
    }
    ramp
}

/// Simulate one segmenter's probability map for a ground-truth mask.
///
/// Deterministic per `(truth, profile, seed)`.
pub fn simulate_segmenter(
    truth: &BinaryMask,
    profile: &SegmenterProfile,
    seed: u64,
) -> Result<ScalarVolume, SynthError> {
    if truth.labels.iter().all(|&l| l == 0) {
        return Err(SynthError::EmptyTruth);
    }
    let ramp = signed_ramp(truth);
    let temp = profile.temperature.max(1e-12);
    let mut values: Vec<f32> = ramp
        .iter()
        .map(|&d| {
            let z = (d + profile.boundary_bias_mm) / temp;
            (1.0 / (1.0 + (-z).exp())) as f32
        })
        .collect();
    let mut vol = ScalarVolume {
        meta: truth.meta,
        values: std::mem::take(&mut values),
    };
    for _ in 0..profile.blur_passes {
        vol = smooth_box3(&vol);
    }
    if profile.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = rand_distr::Normal::new(0.0, profile.noise_sigma).unwrap();
        for v in vol.values.iter_mut() {
            let noisy = *v as f64 + dist.sample(&mut rng);
            *v = noisy.clamp(0.0, 1.0) as f32;
        }
    }
    for v in vol.values.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(vol)
}
