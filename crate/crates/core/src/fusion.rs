//! Non-trainable ensemble combiners over per-voxel foreground probabilities:
//! majority vote, average, product rule and min/max, plus the full fuse
//! pipeline (smooth inputs, combine, smooth the support, threshold).
//!
//! Conventions fixed here: natural logarithms in the product rule,
//! probabilities clamped to `[EPS, 1 - EPS]` before taking logs, and every
//! tie (equal supports, or an even vote split) resolved to background.

use thiserror::Error;

use crate::volume::{BinaryMask, GridMeta, ScalarVolume, VolumeError, binarize, smooth_box3};

/// Probability clamp applied before logs; keeps supports finite when
/// segmenter outputs saturate at exactly 0 or 1.
pub const EPS: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("at least two probability maps are required, got {0}")]
    TooFewMaps(usize),
    #[error("training mask list is empty")]
    EmptyInput,
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error("foreground prior must lie strictly in (0, 1), got {0}")]
    BadPrior(f64),
}

/// Prior probability of the foreground class, estimated from training masks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForegroundPrior(f64);

impl ForegroundPrior {
    pub fn new(value: f64) -> Result<Self, FusionError> {
        if value > 0.0 && value < 1.0 {
            Ok(ForegroundPrior(value))
        } else {
            Err(FusionError::BadPrior(value))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinerKind {
    MajorityVote,
    Average,
    Product,
    MinMax,
}

impl CombinerKind {
    pub const ALL: [CombinerKind; 4] = [
        CombinerKind::MajorityVote,
        CombinerKind::Average,
        CombinerKind::Product,
        CombinerKind::MinMax,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CombinerKind::MajorityVote => "majority_vote",
            CombinerKind::Average => "average",
            CombinerKind::Product => "product",
            CombinerKind::MinMax => "min_max",
        }
    }
}

impl std::str::FromStr for CombinerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "majority_vote" | "majority" => Ok(CombinerKind::MajorityVote),
            "average" => Ok(CombinerKind::Average),
            "product" => Ok(CombinerKind::Product),
            "min_max" | "minmax" => Ok(CombinerKind::MinMax),
            other => Err(format!("unknown combiner '{other}'")),
        }
    }
}

/// Continuous supports from a combiner that defines them. For the product
/// rule these are log-domain.
#[derive(Debug, Clone)]
pub struct FusionSupport {
    pub foreground: ScalarVolume,
    pub background: ScalarVolume,
}

fn check_maps(maps: &[ScalarVolume]) -> Result<GridMeta, FusionError> {
    if maps.len() < 2 {
        return Err(FusionError::TooFewMaps(maps.len()));
    }
    let meta = maps[0].meta;
    for m in &maps[1..] {
        meta.check_compatible(&m.meta)?;
    }
    Ok(meta)
}

/// Proportion of foreground voxels over all training masks, clamped into
/// `[EPS, 1 - EPS]`.
pub fn estimate_prior(training_masks: &[BinaryMask]) -> Result<ForegroundPrior, FusionError> {
    if training_masks.is_empty() {
        return Err(FusionError::EmptyInput);
    }
    let mut fg = 0usize;
    let mut total = 0usize;
    for m in training_masks {
        fg += m.labels.iter().filter(|&&l| l == 1).count();
        total += m.labels.len();
    }
    let p = (fg as f64 / total as f64).clamp(EPS, 1.0 - EPS);
    ForegroundPrior::new(p)
}

/// Per voxel: each map votes by thresholding at 0.5; foreground iff strictly
/// more than half of the maps vote foreground. An even split is background.
pub fn combine_majority(maps: &[ScalarVolume]) -> Result<BinaryMask, FusionError> {
    let meta = check_maps(maps)?;
    let n = maps.len();
    let labels = (0..meta.voxel_count())
        .map(|v| {
            let votes = maps.iter().filter(|m| m.values[v] as f64 > 0.5).count();
            u8::from(2 * votes > n)
        })
        .collect();
    Ok(BinaryMask { meta, labels })
}

/// Mean of the member probabilities, thresholded at 0.5.
pub fn combine_average(maps: &[ScalarVolume]) -> Result<(ScalarVolume, BinaryMask), FusionError> {
    let meta = check_maps(maps)?;
    let n = maps.len() as f64;
    let values: Vec<f32> = (0..meta.voxel_count())
        .map(|v| {
            let s: f64 = maps.iter().map(|m| m.values[v] as f64).sum();
            (s / n) as f32
        })
        .collect();
    let support = ScalarVolume { meta, values };
    let mask = binarize(&support, 0.5);
    Ok((support, mask))
}

/// Log-domain product rule with prior correction:
/// `P_f = -ln(P_f0) + sum ln(p_i)`, `P_b = -ln(1 - P_f0) + sum ln(1 - p_i)`,
/// foreground iff `P_f > P_b`.
pub fn combine_product(
    maps: &[ScalarVolume],
    prior: ForegroundPrior,
) -> Result<(FusionSupport, BinaryMask), FusionError> {
    let meta = check_maps(maps)?;
    let lp0 = prior.value().ln();
    let lb0 = (1.0 - prior.value()).ln();
    let n = meta.voxel_count();
    let mut fg = Vec::with_capacity(n);
    let mut bg = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        let mut pf = -lp0;
        let mut pb = -lb0;
        for m in maps {
            let p = (m.values[v] as f64).clamp(EPS, 1.0 - EPS);
            pf += p.ln();
            pb += (1.0 - p).ln();
        }
        fg.push(pf as f32);
        bg.push(pb as f32);
        labels.push(u8::from(pf > pb));
    }
    Ok((
        FusionSupport {
            foreground: ScalarVolume { meta, values: fg },
            background: ScalarVolume { meta, values: bg },
        },
        BinaryMask { meta, labels },
    ))
}

/// Min/max rule (identical for two classes): `P_f = min p_i`,
/// `P_b = min (1 - p_i)`, foreground iff `P_f > P_b`.
pub fn combine_minmax(
    maps: &[ScalarVolume],
) -> Result<(FusionSupport, BinaryMask), FusionError> {
    let meta = check_maps(maps)?;
    let n = meta.voxel_count();
    let mut fg = Vec::with_capacity(n);
    let mut bg = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        let mut pf = f64::INFINITY;
        let mut pb = f64::INFINITY;
        for m in maps {
            let p = m.values[v] as f64;
            pf = pf.min(p);
            pb = pb.min(1.0 - p);
        }
        fg.push(pf as f32);
        bg.push(pb as f32);
        labels.push(u8::from(pf > pb));
    }
    Ok((
        FusionSupport {
            foreground: ScalarVolume { meta, values: fg },
            background: ScalarVolume { meta, values: bg },
        },
        BinaryMask { meta, labels },
    ))
}

/// Continuous ensemble support in the probability domain, used as the field
/// that gets smoothed in the fuse pipeline.
///
/// For average/product/min-max this is `P_f / (P_f + P_b)` (the product
/// rule's log supports are exponentiated first); for majority vote it is the
/// `{0, 1}` vote result cast to reals.
pub fn ensemble_support(
    maps: &[ScalarVolume],
    kind: CombinerKind,
    prior: ForegroundPrior,
) -> Result<ScalarVolume, FusionError> {
    let meta = check_maps(maps)?;
    match kind {
        CombinerKind::MajorityVote => Ok(combine_majority(maps)?.to_scalar()),
        CombinerKind::Average => {
            let n = maps.len() as f64;
            let values = (0..meta.voxel_count())
                .map(|v| {
                    let pf: f64 = maps.iter().map(|m| m.values[v] as f64).sum::<f64>() / n;
                    let pb: f64 = maps.iter().map(|m| 1.0 - m.values[v] as f64).sum::<f64>() / n;
                    (pf / (pf + pb).max(EPS)) as f32
                })
                .collect();
            Ok(ScalarVolume { meta, values })
        }
        CombinerKind::Product => {
            let (sup, _) = combine_product(maps, prior)?;
            let values = sup
                .foreground
                .values
                .iter()
                .zip(&sup.background.values)
                .map(|(&pf, &pb)| {
                    // e^pf / (e^pf + e^pb), computed as a logistic for stability
                    let d = pb as f64 - pf as f64;
                    (1.0 / (1.0 + d.exp())) as f32
                })
                .collect();
            Ok(ScalarVolume { meta, values })
        }
        CombinerKind::MinMax => {
            let values = (0..meta.voxel_count())
                .map(|v| {
                    let pf = maps
                        .iter()
                        .map(|m| (m.values[v] as f64).clamp(EPS, 1.0 - EPS))
                        .fold(f64::INFINITY, f64::min);
                    let pb = maps
                        .iter()
                        .map(|m| 1.0 - (m.values[v] as f64).clamp(EPS, 1.0 - EPS))
                        .fold(f64::INFINITY, f64::min);
                    (pf / (pf + pb)) as f32
                })
                .collect();
            Ok(ScalarVolume { meta, values })
        }
    }
}

/// Full fuse pipeline for one case.
///
/// With smoothing off this is just the combiner's decision. With smoothing
/// on, each input map is box-smoothed, the combiner's continuous support is
/// box-smoothed, and the result is thresholded at 0.5.
pub fn fuse_case(
    maps: &[ScalarVolume],
    kind: CombinerKind,
    prior: ForegroundPrior,
    smoothing: bool,
) -> Result<BinaryMask, FusionError> {
    check_maps(maps)?;
    if !smoothing {
        return Ok(match kind {
            CombinerKind::MajorityVote => combine_majority(maps)?,
            CombinerKind::Average => combine_average(maps)?.1,
            CombinerKind::Product => combine_product(maps, prior)?.1,
            CombinerKind::MinMax => combine_minmax(maps)?.1,
        });
    }
    let smoothed: Vec<ScalarVolume> = maps.iter().map(smooth_box3).collect();
    let support = ensemble_support(&smoothed, kind, prior)?;
    Ok(binarize(&smooth_box3(&support), 0.5))
}
