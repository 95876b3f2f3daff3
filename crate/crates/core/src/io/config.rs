//! Run configuration, read from a TOML file.
//!
//! ```toml
//! manifest = "cases/manifest.toml"
//! combiner = "average"
//! smoothing = true
//! alpha = 0.05
//! output_dir = "out"
//!
//! [prior]
//! source = "estimate"    # or: source = "explicit", value = 0.3
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::fusion::CombinerKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum PriorSource {
    /// Estimate the foreground prior from the training-split masks.
    Estimate,
    /// Use a fixed prior value.
    Explicit { value: f64 },
}

fn default_alpha() -> f64 {
    0.05
}

fn default_smoothing() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub combiner: CombinerKind,
    #[serde(default = "default_smoothing")]
    pub smoothing: bool,
    #[serde(default = "default_prior")]
    pub prior: PriorSource,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub output_dir: PathBuf,
}

fn default_prior() -> PriorSource {
    PriorSource::Estimate
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, IoError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut config: RunConfig =
            toml::from_str(&text).map_err(|e| IoError::SchemaError(e.to_string()))?;
        config.validate()?;
        // Relative paths are resolved against the config file's directory.
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.manifest = base.join(&config.manifest);
        config.output_dir = base.join(&config.output_dir);
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), IoError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(IoError::SchemaError(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if let PriorSource::Explicit { value } = self.prior {
            if !(value > 0.0 && value < 1.0) {
                return Err(IoError::SchemaError(format!(
                    "explicit prior must lie in (0, 1), got {value}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_config(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("run.toml");
        std::fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn full_config_parses() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            r#"
manifest = "cases/manifest.toml"
combiner = "product"
smoothing = false
alpha = 0.01
output_dir = "out"

[prior]
source = "explicit"
value = 0.25
"#,
        );
        let c = RunConfig::load(&path).unwrap();
        assert_eq!(c.combiner, CombinerKind::Product);
        assert!(!c.smoothing);
        assert_eq!(c.alpha, 0.01);
        assert_eq!(c.prior, PriorSource::Explicit { value: 0.25 });
        assert_eq!(c.manifest, dir.path().join("cases/manifest.toml"));
        assert_eq!(c.output_dir, dir.path().join("out"));
    }

    #[test]
    fn defaults_apply() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            r#"
manifest = "m.toml"
combiner = "majority_vote"
output_dir = "out"
"#,
        );
        let c = RunConfig::load(&path).unwrap();
        assert!(c.smoothing);
        assert_eq!(c.alpha, 0.05);
        assert_eq!(c.prior, PriorSource::Estimate);
    }

    #[test]
    fn bad_alpha_rejected() {
        let dir = tempfile::tempdir().unwrap();
        for alpha in ["0.0", "1.0", "-0.1"] {
            let path = write_config(
                dir.path(),
                &format!(
                    "manifest = \"m.toml\"\ncombiner = \"average\"\nalpha = {alpha}\noutput_dir = \"out\"\n"
                ),
            );
            assert!(matches!(RunConfig::load(&path), Err(IoError::SchemaError(_))));
        }
    }

    #[test]
    fn bad_explicit_prior_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            r#"
manifest = "m.toml"
combiner = "average"
output_dir = "out"

[prior]
source = "explicit"
value = 1.0
"#,
        );
        assert!(matches!(RunConfig::load(&path), Err(IoError::SchemaError(_))));
    }

    #[test]
    fn unknown_combiner_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            "manifest = \"m.toml\"\ncombiner = \"median\"\noutput_dir = \"out\"\n",
        );
        assert!(matches!(RunConfig::load(&path), Err(IoError::SchemaError(_))));
    }
}
