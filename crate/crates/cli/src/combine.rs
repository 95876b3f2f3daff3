//! `combine`: fuse every case with the configured combiner and write the
//! fused mask (plus the continuous support where the combiner defines one).
//! Per-case failures are collected, not fail-fast.

use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use segfuse::fusion::{CombinerKind, ensemble_support, fuse_case};
use segfuse::io::{CaseManifest, RunConfig, Volume, load_manifest, read_volume, write_volume};
use segfuse::volume::smooth_box3;
use segfuse::{ForegroundPrior, ScalarVolume};

use crate::prior::resolve_prior;

pub fn read_maps(case: &CaseManifest) -> anyhow::Result<Vec<ScalarVolume>> {
    case.segmenter_maps
        .iter()
        .map(|p| {
            read_volume(p)
                .and_then(|v| v.into_scalar())
                .with_context(|| format!("reading probability map {}", p.display()))
        })
        .collect()
}

fn process_case(
    case: &CaseManifest,
    config: &RunConfig,
    prior: ForegroundPrior,
) -> anyhow::Result<()> {
    let maps = read_maps(case)?;
    let kind = config.combiner;
    let mask = fuse_case(&maps, kind, prior, config.smoothing)?;
    let mask_path = config
        .output_dir
        .join(format!("{}_{}.mhd", case.case_id, kind.name()));
    write_volume(&Volume::Mask(mask), &mask_path)?;
    // Majority voting has no continuous support beyond the vote itself.
    if kind != CombinerKind::MajorityVote {
        let support = if config.smoothing {
            let smoothed: Vec<ScalarVolume> = maps.iter().map(smooth_box3).collect();
            smooth_box3(&ensemble_support(&smoothed, kind, prior)?)
        } else {
            ensemble_support(&maps, kind, prior)?
        };
        let support_path = config
            .output_dir
            .join(format!("{}_{}_support.mhd", case.case_id, kind.name()));
        write_volume(&Volume::Scalar(support), &support_path)?;
    }
    Ok(())
}

pub fn run(config_path: &Path) -> anyhow::Result<i32> {
    let config = RunConfig::load(config_path)?;
    let cases = load_manifest(&config.manifest)?;
    let prior = resolve_prior(&config, &cases)?;
    std::fs::create_dir_all(&config.output_dir)?;
    let failures: Vec<(String, anyhow::Error)> = cases
        .par_iter()
        .filter_map(|case| {
            process_case(case, &config, prior)
                .err()
                .map(|e| (case.case_id.clone(), e))
        })
        .collect();
    if failures.is_empty() {
        println!("combined {} cases with {}", cases.len(), config.combiner.name());
        Ok(0)
    } else {
        for (id, e) in &failures {
            eprintln!("case {id}: {e:#}");
        }
        eprintln!(
            "{} of {} cases failed; the rest were written",
            failures.len(),
            cases.len()
        );
        Ok(2)
    }
}
