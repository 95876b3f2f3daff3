//! MetaImage-style volume pairs: a small text header (`.mhd`) next to a raw
//! little-endian payload (`.raw`), x-fastest element order.
//!
//! Header keys (one `Key = value` per line):
//! `ObjectType = Image`, `NDims = 3`, `DimSize = nx ny nz`,
//! `ElementSpacing = sx sy sz`, `ElementType = MET_UCHAR | MET_FLOAT`,
//! `ElementDataFile = <raw file name, relative to the header>`.
//!
//! `MET_UCHAR` payloads are binary masks and may only contain 0 or 1.
//! `MET_FLOAT` payloads are probability maps; values outside [0, 1] by more
//! than 1e-6 are an error, values within that tolerance are clamped.

use std::collections::HashMap;
use std::path::Path;

use super::IoError;
use crate::volume::{BinaryMask, GridMeta, ScalarVolume};

const FLOAT_TOLERANCE: f64 = 1e-6;

/// A volume read from disk: the element type decides which variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Volume {
    Scalar(ScalarVolume),
    Mask(BinaryMask),
}

impl Volume {
    pub fn meta(&self) -> GridMeta {
        match self {
            Volume::Scalar(v) => v.meta,
            Volume::Mask(m) => m.meta,
        }
    }

    pub fn into_scalar(self) -> Result<ScalarVolume, IoError> {
        match self {
            Volume::Scalar(v) => Ok(v),
            Volume::Mask(_) => Err(IoError::ParseError(
                "expected a probability volume (MET_FLOAT), found a mask".into(),
            )),
        }
    }

    pub fn into_mask(self) -> Result<BinaryMask, IoError> {
        match self {
            Volume::Mask(m) => Ok(m),
            Volume::Scalar(_) => Err(IoError::ParseError(
                "expected a mask volume (MET_UCHAR), found a probability map".into(),
            )),
        }
    }
}

impl From<ScalarVolume> for Volume {
    fn from(v: ScalarVolume) -> Self {
        Volume::Scalar(v)
    }
}

impl From<BinaryMask> for Volume {
    fn from(m: BinaryMask) -> Self {
        Volume::Mask(m)
    }
}

fn parse_triple<T: std::str::FromStr>(value: &str, key: &str) -> Result<(T, T, T), IoError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(IoError::ParseError(format!(
            "{key} must have 3 components, got '{value}'"
        )));
    }
    let mut it = parts.iter().map(|p| {
        p.parse::<T>()
            .map_err(|_| IoError::ParseError(format!("bad {key} component '{p}'")))
    });
    Ok((
        it.next().unwrap()?,
        it.next().unwrap()?,
        it.next().unwrap()?,
    ))
}

pub fn read_volume(path: impl AsRef<Path>) -> Result<Volume, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut fields: HashMap<String, String> = HashMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| IoError::ParseError(format!("malformed header line '{line}'")))?;
        fields.insert(key.trim().to_string(), value.trim().to_string());
    }
    let get = |key: &str| {
        fields
            .get(key)
            .ok_or_else(|| IoError::ParseError(format!("missing header key {key}")))
    };
    if get("ObjectType")? != "Image" {
        return Err(IoError::ParseError("ObjectType must be Image".into()));
    }
    if get("NDims")? != "3" {
        return Err(IoError::ParseError("NDims must be 3".into()));
    }
    let dims: (usize, usize, usize) = parse_triple(get("DimSize")?, "DimSize")?;
    let spacing: (f64, f64, f64) = parse_triple(get("ElementSpacing")?, "ElementSpacing")?;
    let meta = GridMeta::new(dims, spacing)
        .map_err(|e| IoError::ParseError(format!("invalid grid: {e}")))?;
    let element_type = get("ElementType")?.clone();
    let data_file = get("ElementDataFile")?.clone();
    let raw_path = path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&data_file);
    let payload = std::fs::read(&raw_path)?;
    let n = meta.voxel_count();

    match element_type.as_str() {
        "MET_UCHAR" => {
            if payload.len() != n {
                return Err(IoError::PayloadSizeMismatch {
                    want: n,
                    got: payload.len(),
                });
            }
            for (i, &b) in payload.iter().enumerate() {
                if b > 1 {
                    return Err(IoError::ParseError(format!(
                        "mask label {b} at element {i} is not 0 or 1"
                    )));
                }
            }
            Ok(Volume::Mask(BinaryMask {
                meta,
                labels: payload,
            }))
        }
        "MET_FLOAT" => {
            if payload.len() != n * 4 {
                return Err(IoError::PayloadSizeMismatch {
                    want: n,
                    got: payload.len() / 4,
                });
            }
            let mut values = Vec::with_capacity(n);
            for (i, chunk) in payload.chunks_exact(4).enumerate() {
                let v = f32::from_le_bytes(chunk.try_into().unwrap());
                let vf = v as f64;
                if !(-FLOAT_TOLERANCE..=1.0 + FLOAT_TOLERANCE).contains(&vf) {
                    return Err(IoError::ValueOutOfRange { index: i, value: vf });
                }
                values.push(v.clamp(0.0, 1.0));
            }
            Ok(Volume::Scalar(ScalarVolume { meta, values }))
        }
        other => Err(IoError::ParseError(format!(
            "unsupported ElementType '{other}'"
        ))),
    }
}

/// Write a volume as a header/raw pair. Byte output is deterministic for
/// identical inputs; `path` should end in `.mhd`, the raw file is written
/// next to it with a `.raw` extension.
pub fn write_volume(volume: &Volume, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let raw_path = path.with_extension("raw");
    let raw_name = raw_path
        .file_name()
        .ok_or_else(|| IoError::ParseError("destination has no file name".into()))?
        .to_string_lossy()
        .into_owned();
    let meta = volume.meta();
    let element_type = match volume {
        Volume::Scalar(_) => "MET_FLOAT",
        Volume::Mask(_) => "MET_UCHAR",
    };
    let header = format!(
        "ObjectType = Image\n\
         NDims = 3\n\
         DimSize = {} {} {}\n\
         ElementSpacing = {} {} {}\n\
         ElementType = {element_type}\n\
         ElementDataFile = {raw_name}\n",
        meta.dims.0, meta.dims.1, meta.dims.2, meta.spacing.0, meta.spacing.1, meta.spacing.2,
    );
    let payload: Vec<u8> = match volume {
        Volume::Scalar(v) => v.values.iter().flat_map(|x| x.to_le_bytes()).collect(),
        Volume::Mask(m) => m.labels.clone(),
    };
    std::fs::write(path, header)?;
    std::fs::write(raw_path, payload)?;
    Ok(())
}
