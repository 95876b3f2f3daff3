//! Fusion of 3D segmentation probability maps with non-trainable ensemble
//! combiners, volumetric evaluation metrics (DICE, RAVD, ASSD, MSSD), and a
//! statistical comparison and reporting pipeline.
//!
//! Modules:
//! - [`volume`]: grid types, binarization, border extraction, 3x3x3 box
//!   smoothing
//! - [`fusion`]: majority vote / average / product / min-max combiners and
//!   the fuse pipeline
//! - [`metrics`]: the four per-case metrics with exact surface distances
//! - [`stats`]: normality-screened significance tests, win/loss scores,
//!   overfitting magnitudes
//! - [`synth`]: deterministic phantoms and simulated segmenter outputs
//! - [`io`]: bit-exact volume files, case manifests, results tables
//! - [`report`]: SVG glyph plots and the colour-coded overfit matrix

pub mod fusion;
pub mod io;
pub mod metrics;
pub mod report;
pub mod spatial;
pub mod stats;
pub mod synth;
pub mod volume;

pub use fusion::{CombinerKind, ForegroundPrior};
pub use metrics::MetricSet;
pub use volume::{BinaryMask, GridMeta, ScalarVolume};
