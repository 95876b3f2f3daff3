//! `report`: glyph plot of the test means and the train-vs-test
//! overfitting matrix, both as self-contained SVG.

use std::path::Path;

use segfuse::io::{RunConfig, read_means};
use segfuse::report::{glyph_layout, overfit_matrix, polygon_area, render_glyph_svg, render_overfit_svg};

pub fn run(config_path: &Path) -> anyhow::Result<i32> {
    let config = RunConfig::load(config_path)?;
    let train = read_means(config.output_dir.join("means_train.csv"))?;
    let test = read_means(config.output_dir.join("means_test.csv"))?;

    let layout = glyph_layout(&test)?;
    for metric in &layout.constant_spokes {
        eprintln!(
            "warning: {} is constant across methods; its spoke is pinned to 0.1",
            metric.name()
        );
    }
    std::fs::write(config.output_dir.join("glyph.svg"), render_glyph_svg(&layout))?;
    for (method, radii) in layout.methods.iter().zip(&layout.radii) {
        println!("{method}: glyph area {:.4}", polygon_area(radii));
    }

    let matrix = overfit_matrix(&train, &test)?;
    std::fs::write(
        config.output_dir.join("overfit.svg"),
        render_overfit_svg(&matrix),
    )?;
    println!(
        "wrote glyph.svg and overfit.svg to {}",
        config.output_dir.display()
    );
    Ok(0)
}
