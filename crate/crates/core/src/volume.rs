//! Core 3D grid types: scalar (probability) volumes and binary masks.
//!
//! Voxels are stored in a dense, x-fastest linear layout: the voxel at
//! `(i, j, k)` lives at index `i + nx * (j + ny * k)`. This layout is part
//! of the on-disk format contract, see the `io` module.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum VolumeError {
    #[error("grid dims must all be >= 1, got {0:?}")]
    EmptyDims((usize, usize, usize)),
    #[error("voxel spacings must all be > 0, got {0:?}")]
    BadSpacing((f64, f64, f64)),
    #[error("value buffer length {got} does not match dims product {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("incompatible grids: {0:?} vs {1:?}")]
    IncompatibleGrids(GridMeta, GridMeta),
}

/// Grid geometry: voxel counts along x/y/z and the physical voxel size in mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMeta {
    pub dims: (usize, usize, usize),
    pub spacing: (f64, f64, f64),
}

impl GridMeta {
    pub fn new(dims: (usize, usize, usize), spacing: (f64, f64, f64)) -> Result<Self, VolumeError> {
        if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
            return Err(VolumeError::EmptyDims(dims));
        }
        if !(spacing.0 > 0.0 && spacing.1 > 0.0 && spacing.2 > 0.0) {
            return Err(VolumeError::BadSpacing(spacing));
        }
        Ok(GridMeta { dims, spacing })
    }

    /// Isotropic unit spacing, mostly for tests and phantoms.
    pub fn isotropic(dims: (usize, usize, usize)) -> Result<Self, VolumeError> {
        Self::new(dims, (1.0, 1.0, 1.0))
    }

    pub fn voxel_count(&self) -> usize {
        self.dims.0 * self.dims.1 * self.dims.2
    }

    /// Two grids are compatible iff dims and spacing are equal component-wise.
    pub fn compatible(&self, other: &GridMeta) -> bool {
        self.dims == other.dims && self.spacing == other.spacing
    }

    pub fn check_compatible(&self, other: &GridMeta) -> Result<(), VolumeError> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(VolumeError::IncompatibleGrids(*self, *other))
        }
    }

    #[inline]
    pub fn linear_index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.dims.0 && j < self.dims.1 && k < self.dims.2);
        i + self.dims.0 * (j + self.dims.1 * k)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let (nx, ny, _) = self.dims;
        (idx % nx, (idx / nx) % ny, idx / (nx * ny))
    }

    /// World-space position (mm) of a voxel centre.
    #[inline]
    pub fn world_point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            i as f64 * self.spacing.0,
            j as f64 * self.spacing.1,
            k as f64 * self.spacing.2,
        ]
    }

    /// Length of the grid's world-space diagonal in mm. Used as the
    /// worst-case sentinel for degenerate surface distances.
    pub fn world_diagonal(&self) -> f64 {
        let dx = (self.dims.0 - 1) as f64 * self.spacing.0;
        let dy = (self.dims.1 - 1) as f64 * self.spacing.1;
        let dz = (self.dims.2 - 1) as f64 * self.spacing.2;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Dense 3D grid of real values, one per voxel. When it represents a
/// probability map every value lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarVolume {
    pub meta: GridMeta,
    pub values: Vec<f32>,
}

impl ScalarVolume {
    pub fn new(meta: GridMeta, values: Vec<f32>) -> Result<Self, VolumeError> {
        if values.len() != meta.voxel_count() {
            return Err(VolumeError::LengthMismatch {
                got: values.len(),
                want: meta.voxel_count(),
            });
        }
        Ok(ScalarVolume { meta, values })
    }

    pub fn constant(meta: GridMeta, value: f32) -> Self {
        let n = meta.voxel_count();
        ScalarVolume {
            meta,
            values: vec![value; n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f32 {
        self.values[self.meta.linear_index(i, j, k)]
    }

    pub fn is_probability_map(&self) -> bool {
        self.values.iter().all(|&v| (0.0..=1.0).contains(&v))
    }
}

/// Dense 3D grid of `{0, 1}` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMask {
    pub meta: GridMeta,
    pub labels: Vec<u8>,
}

impl BinaryMask {
    pub fn new(meta: GridMeta, labels: Vec<u8>) -> Result<Self, VolumeError> {
        if labels.len() != meta.voxel_count() {
            return Err(VolumeError::LengthMismatch {
                got: labels.len(),
                want: meta.voxel_count(),
            });
        }
        debug_assert!(labels.iter().all(|&l| l <= 1));
        Ok(BinaryMask { meta, labels })
    }

    pub fn empty(meta: GridMeta) -> Self {
        let n = meta.voxel_count();
        BinaryMask {
            meta,
            labels: vec![0; n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u8 {
        self.labels[self.meta.linear_index(i, j, k)]
    }

    /// The mask reinterpreted as a real-valued `{0.0, 1.0}` field.
    pub fn to_scalar(&self) -> ScalarVolume {
        ScalarVolume {
            meta: self.meta,
            values: self.labels.iter().map(|&l| l as f32).collect(),
        }
    }
}

/// Threshold a probability map: a voxel is foreground iff its value is
/// strictly greater than `threshold`. A voxel exactly at the threshold is
/// background.
pub fn binarize(v: &ScalarVolume, threshold: f64) -> BinaryMask {
    BinaryMask {
        meta: v.meta,
        labels: v
            .values
            .iter()
            .map(|&p| u8::from(p as f64 > threshold))
            .collect(),
    }
}

/// Number of foreground voxels.
pub fn cardinality(m: &BinaryMask) -> usize {
    m.labels.iter().filter(|&&l| l == 1).count()
}

/// Foreground voxels with at least one 6-connected neighbour that is
/// background or outside the grid. Ordered by ascending linear index.
pub fn border_voxels(m: &BinaryMask) -> Vec<(usize, usize, usize)> {
    let (nx, ny, nz) = m.meta.dims;
    let mut out = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if m.get(i, j, k) == 0 {
                    continue;
                }
                let exposed = (i == 0 || m.get(i - 1, j, k) == 0)
                    || (i + 1 == nx || m.get(i + 1, j, k) == 0)
                    || (j == 0 || m.get(i, j - 1, k) == 0)
                    || (j + 1 == ny || m.get(i, j + 1, k) == 0)
                    || (k == 0 || m.get(i, j, k - 1) == 0)
                    || (k + 1 == nz || m.get(i, j, k + 1) == 0);
                if exposed {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Background voxels with at least one 6-connected foreground neighbour.
/// This is the outer shell of the foreground, used by the synthetic
/// segmenter's signed ramp.
pub fn outer_border_voxels(m: &BinaryMask) -> Vec<(usize, usize, usize)> {
    let (nx, ny, nz) = m.meta.dims;
    let mut out = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                if m.get(i, j, k) == 1 {
                    continue;
                }
                let touching = (i > 0 && m.get(i - 1, j, k) == 1)
                    || (i + 1 < nx && m.get(i + 1, j, k) == 1)
                    || (j > 0 && m.get(i, j - 1, k) == 1)
                    || (j + 1 < ny && m.get(i, j + 1, k) == 1)
                    || (k > 0 && m.get(i, j, k - 1) == 1)
                    || (k + 1 < nz && m.get(i, j, k + 1) == 1);
                if touching {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// 3x3x3 box mean with replicate padding at the grid borders.
///
/// Runs as three separable 3-tap passes (x, then y, then z); per-axis
/// replicate padding is equivalent to replicate-padding the full volume.
/// Output values are clamped to the input's `[min, max]` range so float
/// rounding can never push a value outside it.
pub fn smooth_box3(v: &ScalarVolume) -> ScalarVolume {
    let (nx, ny, nz) = v.meta.dims;
    let n = v.values.len();
    let mut cur: Vec<f32> = v.values.clone();
    let mut tmp: Vec<f32> = vec![0.0; n];

    let idx = |i: usize, j: usize, k: usize| i + nx * (j + ny * k);

    // x pass
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let l = if i == 0 { 0 } else { i - 1 };
                let r = if i + 1 == nx { i } else { i + 1 };
                let s = cur[idx(l, j, k)] as f64 + cur[idx(i, j, k)] as f64 + cur[idx(r, j, k)] as f64;
                tmp[idx(i, j, k)] = (s / 3.0) as f32;
            }
        }
    }
    std::mem::swap(&mut cur, &mut tmp);
    // y pass
    for k in 0..nz {
        for j in 0..ny {
            let d = if j == 0 { 0 } else { j - 1 };
            let u = if j + 1 == ny { j } else { j + 1 };
            for i in 0..nx {
                let s = cur[idx(i, d, k)] as f64 + cur[idx(i, j, k)] as f64 + cur[idx(i, u, k)] as f64;
                tmp[idx(i, j, k)] = (s / 3.0) as f32;
            }
        }
    }
    std::mem::swap(&mut cur, &mut tmp);
    // z pass
    for k in 0..nz {
        let b = if k == 0 { 0 } else { k - 1 };
        let f = if k + 1 == nz { k } else { k + 1 };
        for j in 0..ny {
            for i in 0..nx {
                let s = cur[idx(i, j, b)] as f64 + cur[idx(i, j, k)] as f64 + cur[idx(i, j, f)] as f64;
                tmp[idx(i, j, k)] = (s / 3.0) as f32;
            }
        }
    }

    let (lo, hi) = v
        .values
        .iter()
        .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    for x in tmp.iter_mut() {
        *x = x.clamp(lo, hi);
    }

    ScalarVolume {
        meta: v.meta,
        values: tmp,
    }
}
