//! Case manifests: one TOML file listing, per patient case, the
//! ground-truth mask and the segmenter probability maps.
//!
//! ```toml
//! [[case]]
//! id = "patient_001"
//! split = "train"
//! ground_truth = "gt/patient_001.mhd"
//! segmenter_maps = ["maps/p001_unet.mhd", "maps/p001_vnet.mhd"]
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseManifest {
    #[serde(rename = "id")]
    pub case_id: String,
    pub split: Split,
    pub ground_truth: PathBuf,
    pub segmenter_maps: Vec<PathBuf>,
}

#[derive(Debug, Deserialize, Serialize)]
struct ManifestFile {
    #[serde(rename = "case")]
    cases: Vec<CaseManifest>,
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<CaseManifest>, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let parsed: ManifestFile =
        toml::from_str(&text).map_err(|e| IoError::SchemaError(e.to_string()))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut seen = HashSet::new();
    let mut cases = parsed.cases;
    for case in &mut cases {
        if !seen.insert(case.case_id.clone()) {
            return Err(IoError::DuplicateCase(case.case_id.clone()));
        }
        if case.segmenter_maps.len() < 2 {
            return Err(IoError::SchemaError(format!(
                "case '{}' has {} segmenter map(s); fusion needs at least 2",
                case.case_id,
                case.segmenter_maps.len()
            )));
        }
        let mut paths: HashSet<&PathBuf> = HashSet::new();
        paths.insert(&case.ground_truth);
        for m in &case.segmenter_maps {
            if !paths.insert(m) {
                return Err(IoError::SchemaError(format!(
                    "case '{}' lists path '{}' more than once",
                    case.case_id,
                    m.display()
                )));
            }
        }
        case.ground_truth = base.join(&case.ground_truth);
        case.segmenter_maps = case.segmenter_maps.iter().map(|m| base.join(m)).collect();
    }
    Ok(cases)
}

/// Serialize manifests back to TOML (paths written as given).
fn manifest_to_toml(cases: &[CaseManifest]) -> String {
    toml::to_string(&ManifestFile {
        cases: cases.to_vec(),
    })
    .expect("manifest serialization cannot fail")
}

/// Write a manifest file. Paths are written as given; keep them relative to
/// the manifest's directory so `load_manifest` resolves them back.
pub fn save_manifest(cases: &[CaseManifest], path: impl AsRef<Path>) -> Result<(), IoError> {
    std::fs::write(path, manifest_to_toml(cases))?;
    Ok(())
}
