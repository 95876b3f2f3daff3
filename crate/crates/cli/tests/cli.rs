//! End-to-end tests of the binary: orchestration identity against the
//! library, exit-code policy, and byte determinism of all artifacts.

use std::path::Path;
use std::process::{Command, Output};

use segfuse::fusion::{CombinerKind, estimate_prior, fuse_case};
use segfuse::io::{Split, load_manifest, read_results, read_volume};

fn segfuse_cmd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segfuse"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn synth(dir: &Path) {
    let out = segfuse_cmd(
        dir,
        &["synth", "--out", "data", "--cases", "4", "--seed", "11", "--dim", "24"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn hash_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                entries.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    entries.sort();
    entries
}

#[test]
fn combine_matches_library_fusion() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path());
    let out = segfuse_cmd(tmp.path(), &["combine", "--config", "data/config.toml"]);
    assert!(out.status.success());

    let cases = load_manifest(tmp.path().join("data/manifest.toml")).unwrap();
    let train_masks: Vec<_> = cases
        .iter()
        .filter(|c| c.split == Split::Train)
        .map(|c| read_volume(&c.ground_truth).unwrap().into_mask().unwrap())
        .collect();
    let prior = estimate_prior(&train_masks).unwrap();
    for case in &cases {
        let maps: Vec<_> = case
            .segmenter_maps
            .iter()
            .map(|p| read_volume(p).unwrap().into_scalar().unwrap())
            .collect();
        let want = fuse_case(&maps, CombinerKind::Average, prior, true).unwrap();
        let written = read_volume(
            tmp.path()
                .join(format!("data/results/{}_average.mhd", case.case_id)),
        )
        .unwrap()
        .into_mask()
        .unwrap();
        assert_eq!(written, want, "case {}", case.case_id);
    }
}

#[test]
fn missing_case_file_is_partial_failure() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path());
    std::fs::remove_file(tmp.path().join("data/cases/case_001_dm2.mhd")).unwrap();
    let out = segfuse_cmd(tmp.path(), &["combine", "--config", "data/config.toml"]);
    assert_eq!(out.status.code(), Some(2));
    // unaffected cases were still written
    assert!(tmp.path().join("data/results/case_000_average.mhd").exists());
    assert!(tmp.path().join("data/results/case_003_average.mhd").exists());
    assert!(!tmp.path().join("data/results/case_001_average.mhd").exists());
}

#[test]
fn bad_config_is_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("bad.toml"),
        "manifest = \"m.toml\"\ncombiner = \"average\"\nalpha = 1.5\noutput_dir = \"out\"\n",
    )
    .unwrap();
    let out = segfuse_cmd(tmp.path(), &["combine", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(1));
    let out = segfuse_cmd(tmp.path(), &["evaluate", "--config", "missing.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn evaluate_means_match_recomputation() {
    let tmp = tempfile::tempdir().unwrap();
    synth(tmp.path());
    let out = segfuse_cmd(tmp.path(), &["evaluate", "--config", "data/config.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for split in ["train", "test"] {
        let rows =
            read_results(tmp.path().join(format!("data/results/results_{split}.csv"))).unwrap();
        // 2 cases x (4 segmenters + 4 ensembles)
        assert_eq!(rows.len(), 16);
        let want = segfuse::io::mean_metrics(&rows);
        let got =
            segfuse::io::read_means(tmp.path().join(format!("data/results/means_{split}.csv")))
                .unwrap();
        assert_eq!(want.keys().collect::<Vec<_>>(), got.keys().collect::<Vec<_>>());
        // rows carry 4 decimals, so recomputed means agree to 4 decimals
        for (method, w) in &want {
            let g = &got[method];
            assert!((g.dice - w.dice).abs() <= 1e-4, "{method} dice");
            assert!((g.ravd_percent - w.ravd_percent).abs() <= 1e-4);
            assert!((g.assd_mm - w.assd_mm).abs() <= 1e-4);
            assert!((g.mssd_mm - w.mssd_mm).abs() <= 1e-4);
        }
    }
}

#[test]
fn identical_methods_compare_to_no_difference() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::create_dir(tmp.path().join("out")).unwrap();
    std::fs::write(
        tmp.path().join("config.toml"),
        "manifest = \"m.toml\"\ncombiner = \"average\"\noutput_dir = \"out\"\n",
    )
    .unwrap();
    let mut csv = String::from("case_id,method,DICE,RAVD,ASSD,MSSD\n");
    for case in 0..8 {
        for method in ["dm1", "average", "majority_vote", "product", "min_max"] {
            csv.push_str(&format!(
                "c{case},{method},0.9{case},1.{case},2.{case},3.{case}\n"
            ));
        }
    }
    std::fs::write(tmp.path().join("out/results_test.csv"), csv).unwrap();
    let out = segfuse_cmd(tmp.path(), &["compare", "--config", "config.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(!stdout.contains("ensemble_wins"));
    assert!(!stdout.contains("dm_wins"));
    let scores = std::fs::read_to_string(tmp.path().join("out/scores.csv")).unwrap();
    for line in scores.lines().skip(1) {
        assert!(line.ends_with(",0"), "{line}");
    }
}

#[test]
fn full_pipeline_is_byte_deterministic() {
    let run = || {
        let tmp = tempfile::tempdir().unwrap();
        synth(tmp.path());
        for cmd in ["combine", "evaluate"] {
            let out = segfuse_cmd(tmp.path(), &[cmd, "--config", "data/config.toml"]);
            assert!(out.status.success());
        }
        for cmd in ["compare", "report"] {
            let out = segfuse_cmd(tmp.path(), &[cmd, "--config", "data/config.toml"]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        }
        hash_tree(&tmp.path().join("data"))
    };
    let a = run();
    let b = run();
    assert_eq!(a.len(), b.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "{name_a} differs between runs");
    }
}
