//! `evaluate`: all four metrics for every individual segmenter and every
//! ensemble, per case, split into train/test tables plus per-method means.

use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use segfuse::fusion::{CombinerKind, fuse_case};
use segfuse::io::{
    CaseManifest, ResultRow, RunConfig, Split, load_manifest, mean_metrics, read_volume,
    write_means, write_results,
};
use segfuse::metrics::evaluate_case;
use segfuse::volume::binarize;
use segfuse::ForegroundPrior;

use crate::combine::read_maps;
use crate::prior::resolve_prior;

fn case_rows(
    case: &CaseManifest,
    config: &RunConfig,
    prior: ForegroundPrior,
) -> anyhow::Result<Vec<ResultRow>> {
    let truth = read_volume(&case.ground_truth)
        .and_then(|v| v.into_mask())
        .with_context(|| format!("reading ground truth {}", case.ground_truth.display()))?;
    let maps = read_maps(case)?;
    let mut rows = Vec::with_capacity(maps.len() + CombinerKind::ALL.len());
    for (i, map) in maps.iter().enumerate() {
        let eval = evaluate_case(&binarize(map, 0.5), &truth)?;
        if eval.degenerate {
            eprintln!("warning: case {} dm{} produced an empty mask", case.case_id, i + 1);
        }
        rows.push(ResultRow {
            case_id: case.case_id.clone(),
            method: format!("dm{}", i + 1),
            metrics: eval.metrics,
        });
    }
    for kind in CombinerKind::ALL {
        let fused = fuse_case(&maps, kind, prior, config.smoothing)?;
        let eval = evaluate_case(&fused, &truth)?;
        if eval.degenerate {
            eprintln!(
                "warning: case {} ensemble {} produced an empty mask",
                case.case_id,
                kind.name()
            );
        }
        rows.push(ResultRow {
            case_id: case.case_id.clone(),
            method: kind.name().to_string(),
            metrics: eval.metrics,
        });
    }
    Ok(rows)
}

pub fn run(config_path: &Path) -> anyhow::Result<i32> {
    let config = RunConfig::load(config_path)?;
    let cases = load_manifest(&config.manifest)?;
    let prior = resolve_prior(&config, &cases)?;
    std::fs::create_dir_all(&config.output_dir)?;
    let results: Vec<(Split, anyhow::Result<Vec<ResultRow>>)> = cases
        .par_iter()
        .map(|case| (case.split, case_rows(case, &config, prior)))
        .collect();
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    let mut failures = 0usize;
    for ((split, result), case) in results.into_iter().zip(&cases) {
        match result {
            Ok(rows) => match split {
                Split::Train => train_rows.extend(rows),
                Split::Test => test_rows.extend(rows),
            },
            Err(e) => {
                eprintln!("case {}: {e:#}", case.case_id);
                failures += 1;
            }
        }
    }
    write_results(&train_rows, config.output_dir.join("results_train.csv"))?;
    write_results(&test_rows, config.output_dir.join("results_test.csv"))?;
    write_means(&mean_metrics(&train_rows), config.output_dir.join("means_train.csv"))?;
    write_means(&mean_metrics(&test_rows), config.output_dir.join("means_test.csv"))?;
    if failures == 0 {
        println!(
            "evaluated {} cases ({} train rows, {} test rows)",
            cases.len(),
            train_rows.len(),
            test_rows.len()
        );
        Ok(0)
    } else {
        eprintln!("{failures} of {} cases failed; the rest were written", cases.len());
        Ok(2)
    }
}
