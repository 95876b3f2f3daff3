//! Phantom dataset generation: ellipsoid ground truths plus four simulated
//! segmenters with distinct error profiles (opposing boundary biases,
//! different noise and blur), written as a ready-to-run dataset with a
//! manifest and a default run config.

use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segfuse::GridMeta;
use segfuse::io::{CaseManifest, Split, Volume, save_manifest, write_volume};
use segfuse::synth::{Ellipsoid, PhantomSpec, SegmenterProfile, make_phantom, simulate_segmenter};

#[derive(Args)]
pub struct SynthArgs {
    /// Output directory for the dataset.
    #[arg(long)]
    pub out: PathBuf,
    /// Number of cases; the first half goes to the train split.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    /// Master seed; everything downstream is derived from it.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Cubic grid edge length in voxels.
    #[arg(long, default_value_t = 48)]
    pub dim: usize,
}

/// Four segmenter personalities: a dilating one, an eroding one, a noisy
/// low-confidence one and a smooth conservative one. The opposing biases are
/// what gives the ensembles something to cancel out.
pub fn segmenter_profiles() -> [(&'static str, SegmenterProfile); 4] {
    [
        (
            "dm1",
            SegmenterProfile {
                blur_passes: 1,
                boundary_bias_mm: 1.4,
                noise_sigma: 0.05,
                temperature: 1.0,
            },
        ),
        (
            "dm2",
            SegmenterProfile {
                blur_passes: 1,
                boundary_bias_mm: -1.4,
                noise_sigma: 0.05,
                temperature: 1.0,
            },
        ),
        (
            "dm3",
            SegmenterProfile {
                blur_passes: 0,
                boundary_bias_mm: 0.7,
                noise_sigma: 0.12,
                temperature: 1.8,
            },
        ),
        (
            "dm4",
            SegmenterProfile {
                blur_passes: 2,
                boundary_bias_mm: -0.8,
                noise_sigma: 0.08,
                temperature: 0.7,
            },
        ),
    ]
}

fn case_grid(dim: usize) -> anyhow::Result<GridMeta> {
    // anisotropic on purpose: z-spacing differs, like CT stacks do
    Ok(GridMeta::new((dim, dim, dim), (1.2, 1.2, 2.0))?)
}

/// One phantom per case: a main ellipsoid with jittered centre and axes,
/// plus a smaller overlapping lobe.
fn case_spec(grid: GridMeta, rng: &mut ChaCha8Rng) -> PhantomSpec {
    let dim = grid.dims.0 as f64;
    let c = dim / 2.0;
    let jitter = |rng: &mut ChaCha8Rng| (rng.random::<f64>() - 0.5) * 0.12 * dim;
    let center = (c + jitter(rng), c + jitter(rng), c + jitter(rng));
    let ax = 14.0 + rng.random::<f64>() * 6.0;
    let ay = 14.0 + rng.random::<f64>() * 6.0;
    let az = 20.0 + rng.random::<f64>() * 10.0;
    let main = Ellipsoid {
        center_voxels: center,
        semi_axes_mm: (ax, ay, az),
    };
    let lobe = Ellipsoid {
        center_voxels: (
            center.0 + (rng.random::<f64>() - 0.5) * 8.0,
            center.1 + (rng.random::<f64>() - 0.5) * 8.0,
            center.2 + (rng.random::<f64>() - 0.5) * 6.0,
        ),
        semi_axes_mm: (ax * 0.5, ay * 0.5, az * 0.5),
    };
    PhantomSpec {
        grid,
        shapes: vec![main, lobe],
        seed: 0,
    }
}

pub fn run(args: &SynthArgs) -> anyhow::Result<i32> {
    if args.cases < 2 {
        anyhow::bail!("--cases must be at least 2 (need both splits)");
    }
    let grid = case_grid(args.dim)?;
    let case_dir = args.out.join("cases");
    std::fs::create_dir_all(&case_dir)
        .with_context(|| format!("creating {}", case_dir.display()))?;
    let profiles = segmenter_profiles();
    let mut manifests = Vec::with_capacity(args.cases);
    for ci in 0..args.cases {
        let id = format!("case_{ci:03}");
        let mut rng = ChaCha8Rng::seed_from_u64(
            args.seed ^ (ci as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let truth = make_phantom(&case_spec(grid, &mut rng))?;
        let gt_rel = PathBuf::from(format!("cases/{id}_gt.mhd"));
        write_volume(&Volume::Mask(truth.clone()), args.out.join(&gt_rel))?;
        let mut map_rels = Vec::with_capacity(profiles.len());
        for (name, profile) in &profiles {
            let map_seed: u64 = rng.random();
            let map = simulate_segmenter(&truth, profile, map_seed)?;
            let rel = PathBuf::from(format!("cases/{id}_{name}.mhd"));
            write_volume(&Volume::Scalar(map), args.out.join(&rel))?;
            map_rels.push(rel);
        }
        manifests.push(CaseManifest {
            case_id: id,
            split: if ci < args.cases / 2 {
                Split::Train
            } else {
                Split::Test
            },
            ground_truth: gt_rel,
            segmenter_maps: map_rels,
        });
    }
    save_manifest(&manifests, args.out.join("manifest.toml"))?;
    // a ready-to-use config pointing at the freshly written dataset
    let config = "\
manifest = \"manifest.toml\"
combiner = \"average\"
smoothing = true
alpha = 0.05
output_dir = \"results\"

[prior]
source = \"estimate\"
";
    std::fs::write(args.out.join("config.toml"), config)?;
    println!(
        "wrote {} cases ({} train / {} test) to {}",
        args.cases,
        args.cases / 2,
        args.cases - args.cases / 2,
        args.out.display()
    );
    Ok(0)
}
