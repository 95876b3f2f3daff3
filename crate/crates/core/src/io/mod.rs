//! File formats: MetaImage-style header/raw volume pairs (bit-exact
//! contract), TOML case manifests and run configs, and delimiter-separated
//! results tables.

mod config;
mod manifest;
mod mhd;
mod results;

pub use config::{PriorSource, RunConfig};
pub use manifest::{CaseManifest, Split, load_manifest, save_manifest};
pub use mhd::{Volume, read_volume, write_volume};
pub use results::{
    ResultRow, mean_metrics, read_means, read_results, write_means, write_results,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("payload size mismatch: header implies {want} elements, payload has {got}")]
    PayloadSizeMismatch { want: usize, got: usize },
    #[error("probability value {value} at element {index} outside [0, 1]")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("manifest schema error: {0}")]
    SchemaError(String),
    #[error("duplicate case id '{0}'")]
    DuplicateCase(String),
    #[error(transparent)]
    Volume(#[from] crate::volume::VolumeError),
}
