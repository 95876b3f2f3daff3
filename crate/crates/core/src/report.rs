//! Report rendering: glyph plots of per-method mean metrics and the
//! color-coded overfitting matrix. Both render to self-contained SVG with
//! deterministic byte output.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::metrics::MetricSet;
use crate::stats::{MetricKind, OverfitMagnitudes, overfit_magnitude};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report needs at least 2 methods, got {0}")]
    TooFewMethods(usize),
    #[error("train/test method sets differ: '{0}' missing")]
    MismatchedMethods(String),
}

/// Spoke order on the glyph. DICE is reversed (1 - DICE) so that, like the
/// other three metrics, smaller is better and an ideal method collapses to
/// the centre.
pub const SPOKE_ORDER: [MetricKind; 4] = [
    MetricKind::Dice,
    MetricKind::Ravd,
    MetricKind::Assd,
    MetricKind::Mssd,
];

fn spoke_value(metric: MetricKind, m: &MetricSet) -> f64 {
    match metric {
        MetricKind::Dice => 1.0 - m.dice,
        other => other.of(m),
    }
}

/// Scaled glyph radii, one row of four per method. Per spoke, the best
/// method sits at radius 0.1 and the worst at 1.0 (linear min-max scaling).
/// A constant spoke cannot be scaled; it is pinned to 0.1 and flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphLayout {
    pub methods: Vec<String>,
    /// radii[i][s] is method i's radius on spoke s (SPOKE_ORDER).
    pub radii: Vec<[f64; 4]>,
    /// Spokes whose values were identical across all methods.
    pub constant_spokes: Vec<MetricKind>,
}

pub fn glyph_layout(means: &BTreeMap<String, MetricSet>) -> Result<GlyphLayout, ReportError> {
    if means.len() < 2 {
        return Err(ReportError::TooFewMethods(means.len()));
    }
    let methods: Vec<String> = means.keys().cloned().collect();
    let mut radii = vec![[0.1f64; 4]; methods.len()];
    let mut constant_spokes = Vec::new();
    for (s, metric) in SPOKE_ORDER.into_iter().enumerate() {
        let values: Vec<f64> = methods
            .iter()
            .map(|m| spoke_value(metric, &means[m]))
            .collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= 0.0 {
            constant_spokes.push(metric);
            continue; // all radii stay at 0.1
        }
        for (i, v) in values.iter().enumerate() {
            radii[i][s] = 0.1 + 0.9 * (v - lo) / (hi - lo);
        }
    }
    Ok(GlyphLayout {
        methods,
        radii,
        constant_spokes,
    })
}

/// Shoelace area of the closed polygon through the four spoke endpoints
/// (+x, +y, -x, -y). Smaller area = better method overall.
pub fn polygon_area(radii: &[f64; 4]) -> f64 {
    let pts = [
        (radii[0], 0.0),
        (0.0, radii[1]),
        (-radii[2], 0.0),
        (0.0, -radii[3]),
    ];
    let mut twice = 0.0;
    for i in 0..4 {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % 4];
        twice += x0 * y1 - x1 * y0;
    }
    twice.abs() / 2.0
}

const GLYPH_COLORS: [&str; 8] = [
    "#c0392b", "#2471a3", "#1e8449", "#b7950b", "#7d3c98", "#d35400", "#148f77", "#5d6d7e",
];

fn fmt(v: f64) -> String {
    // Fixed formatting keeps the SVG bytes deterministic.
    format!("{v:.4}")
}

/// Self-contained SVG: one closed polygon per method over the four spokes,
/// plus axis lines, spoke labels, and a legend with polygon areas.
pub fn render_glyph_svg(layout: &GlyphLayout) -> String {
    let size = 420.0;
    let cx = size / 2.0;
    let cy = size / 2.0;
    let scale = 150.0; // radius 1.0 in px
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    // axes and unit box
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cccccc\"/>\n",
        fmt(cx - scale),
        fmt(cy),
        fmt(cx + scale),
        fmt(cy)
    ));
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#cccccc\"/>\n",
        fmt(cx),
        fmt(cy - scale),
        fmt(cx),
        fmt(cy + scale)
    ));
    let labels = ["1-DICE", "RAVD", "ASSD", "MSSD"];
    let label_pos = [
        (cx + scale + 6.0, cy + 4.0),
        (cx - 18.0, cy - scale - 8.0),
        (cx - scale - 46.0, cy + 4.0),
        (cx - 18.0, cy + scale + 16.0),
    ];
    for (label, (lx, ly)) in labels.iter().zip(label_pos) {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>\n",
            fmt(lx),
            fmt(ly)
        ));
    }
    for (i, (method, radii)) in layout.methods.iter().zip(&layout.radii).enumerate() {
        let color = GLYPH_COLORS[i % GLYPH_COLORS.len()];
        let pts = [
            (cx + radii[0] * scale, cy),
            (cx, cy - radii[1] * scale),
            (cx - radii[2] * scale, cy),
            (cx, cy + radii[3] * scale),
        ];
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y))).collect();
        svg.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            path.join(" ")
        ));
        let ly = 20.0 + 16.0 * i as f64;
        svg.push_str(&format!(
            "  <rect x=\"8\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n",
            fmt(ly - 9.0)
        ));
        svg.push_str(&format!(
            "  <text x=\"22\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{method} (area {})</text>\n",
            fmt(ly),
            fmt(polygon_area(radii))
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// One overfitting-matrix cell: the signed train-minus-test magnitude and a
/// per-column normalized color value (0 = smallest overfitting, 1 = largest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverfitCell {
    pub magnitude: f64,
    pub color_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverfitMatrix {
    pub methods: Vec<String>,
    /// cells[i][c] for method i, column c in MetricKind::ALL order.
    pub cells: Vec<[OverfitCell; 4]>,
}

/// Overfitting severity: how much better training looked than testing, in
/// the metric's own polarity. Positive = the method overfits.
fn severity(metric: MetricKind, magnitude: f64) -> f64 {
    use crate::stats::Polarity;
    match metric.polarity() {
        Polarity::HigherIsBetter => magnitude,
        Polarity::LowerIsBetter => -magnitude,
    }
}

pub fn overfit_matrix(
    train: &BTreeMap<String, MetricSet>,
    test: &BTreeMap<String, MetricSet>,
) -> Result<OverfitMatrix, ReportError> {
    if train.len() < 2 {
        return Err(ReportError::TooFewMethods(train.len()));
    }
    for key in train.keys().chain(test.keys()) {
        if !(train.contains_key(key) && test.contains_key(key)) {
            return Err(ReportError::MismatchedMethods(key.clone()));
        }
    }
    let methods: Vec<String> = train.keys().cloned().collect();
    let magnitudes: Vec<OverfitMagnitudes> = methods
        .iter()
        .map(|m| overfit_magnitude(&train[m], &test[m]))
        .collect();
    let mut cells = vec![
        [OverfitCell {
            magnitude: 0.0,
            color_value: 0.0
        }; 4];
        methods.len()
    ];
    for (c, metric) in MetricKind::ALL.into_iter().enumerate() {
        let sev: Vec<f64> = magnitudes
            .iter()
            .map(|m| severity(metric, m.get(metric)))
            .collect();
        let lo = sev.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = sev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (i, s) in sev.iter().enumerate() {
            let color_value = if hi - lo <= 0.0 {
                0.0
            } else {
                (s - lo) / (hi - lo)
            };
            cells[i][c] = OverfitCell {
                magnitude: magnitudes[i].get(metric),
                color_value,
            };
        }
    }
    Ok(OverfitMatrix { methods, cells })
}

/// Two-color ramp: warm red at 0 (small overfitting) to cool blue at 1.
fn ramp_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(214.0, 69.0), lerp(69.0, 117.0), lerp(65.0, 214.0))
}

pub fn render_overfit_svg(matrix: &OverfitMatrix) -> String {
    let cell_w = 90.0;
    let cell_h = 26.0;
    let left = 130.0;
    let top = 30.0;
    let width = left + 4.0 * cell_w + 10.0;
    let height = top + matrix.methods.len() as f64 * cell_h + 10.0;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for (c, metric) in MetricKind::ALL.into_iter().enumerate() {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\">{}</text>\n",
            fmt(left + c as f64 * cell_w + cell_w / 2.0 - 16.0),
            metric.name()
        ));
    }
    for (i, method) in matrix.methods.iter().enumerate() {
        let y = top + i as f64 * cell_h;
        svg.push_str(&format!(
            "  <text x=\"8\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{method}</text>\n",
            fmt(y + 17.0)
        ));
        for (c, cell) in matrix.cells[i].iter().enumerate() {
            let x = left + c as f64 * cell_w;
            svg.push_str(&format!(
                "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#ffffff\"/>\n",
                fmt(x),
                fmt(y),
                fmt(cell_w),
                fmt(cell_h),
                ramp_color(cell.color_value)
            ));
            svg.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"white\">{}</text>\n",
                fmt(x + 8.0),
                fmt(y + 17.0),
                fmt(cell.magnitude)
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dice: f64, ravd: f64, assd: f64, mssd: f64) -> MetricSet {
        MetricSet {
            dice,
            ravd_percent: ravd,
            assd_mm: assd,
            mssd_mm: mssd,
        }
    }

    #[test]
    fn dominant_method_pinned_to_inner_ring() {
        let mut means = BTreeMap::new();
        means.insert("good".to_string(), set(0.95, 1.0, 0.5, 10.0));
        means.insert("bad".to_string(), set(0.80, 9.0, 4.0, 60.0));
        let layout = glyph_layout(&means).unwrap();
        let good = layout.methods.iter().position(|m| m == "good").unwrap();
        let bad = 1 - good;
        assert_eq!(layout.radii[good], [0.1; 4]);
        assert_eq!(layout.radii[bad], [1.0; 4]);
        assert!(layout.constant_spokes.is_empty());
        assert!(polygon_area(&layout.radii[good]) < polygon_area(&layout.radii[bad]));
    }

    #[test]
    fn constant_spoke_all_inner_and_flagged() {
        let mut means = BTreeMap::new();
        means.insert("a".to_string(), set(0.9, 2.0, 1.0, 20.0));
        means.insert("b".to_string(), set(0.9, 5.0, 2.0, 40.0));
        let layout = glyph_layout(&means).unwrap();
        assert_eq!(layout.constant_spokes, vec![MetricKind::Dice]);
        for radii in &layout.radii {
            assert_eq!(radii[0], 0.1);
        }
    }

    #[test]
    fn radii_invariant_under_positive_affine_column_rescale() {
        let mut a = BTreeMap::new();
        a.insert("m1".to_string(), set(0.9, 2.0, 1.0, 20.0));
        a.insert("m2".to_string(), set(0.8, 5.0, 2.0, 40.0));
        a.insert("m3".to_string(), set(0.7, 3.0, 4.0, 30.0));
        let mut b = a.clone();
        for m in b.values_mut() {
            m.assd_mm = 7.0 * m.assd_mm + 3.0;
        }
        let la = glyph_layout(&a).unwrap();
        let lb = glyph_layout(&b).unwrap();
        for (ra, rb) in la.radii.iter().zip(&lb.radii) {
            for s in 0..4 {
                assert!((ra[s] - rb[s]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shoelace_matches_closed_form() {
        let radii = [0.3, 0.7, 0.5, 0.2];
        // orthogonal spokes: area = (r0 + r2)(r1 + r3) / 2
        let expect = (0.3 + 0.5) * (0.7 + 0.2) / 2.0;
        assert!((polygon_area(&radii) - expect).abs() < 1e-12);
    }

    #[test]
    fn single_method_rejected() {
        let mut means = BTreeMap::new();
        means.insert("only".to_string(), set(0.9, 1.0, 1.0, 1.0));
        assert!(matches!(
            glyph_layout(&means),
            Err(ReportError::TooFewMethods(1))
        ));
    }

    #[test]
    fn overfit_colors_normalized_per_column() {
        let mut train = BTreeMap::new();
        let mut test = BTreeMap::new();
        // dice overfit severities: 0.10 and 0.02
        train.insert("a".to_string(), set(0.95, 1.0, 1.0, 10.0));
        test.insert("a".to_string(), set(0.85, 2.0, 2.0, 30.0));
        train.insert("b".to_string(), set(0.92, 1.0, 1.5, 10.0));
        test.insert("b".to_string(), set(0.90, 4.0, 1.5, 20.0));
        let m = overfit_matrix(&train, &test).unwrap();
        let a = m.methods.iter().position(|x| x == "a").unwrap();
        let b = 1 - a;
        // column DICE: a overfits more
        assert_eq!(m.cells[a][0].color_value, 1.0);
        assert_eq!(m.cells[b][0].color_value, 0.0);
        // column RAVD (lower better): b's test degrades more → b overfits more
        assert_eq!(m.cells[b][1].color_value, 1.0);
        // constant-severity column defaults to 0
        assert!((m.cells[a][0].magnitude - 0.10).abs() < 1e-12);
    }

    #[test]
    fn overfit_mismatched_methods_rejected() {
        let mut train = BTreeMap::new();
        let mut test = BTreeMap::new();
        train.insert("a".to_string(), set(0.9, 1.0, 1.0, 1.0));
        train.insert("b".to_string(), set(0.9, 1.0, 1.0, 1.0));
        test.insert("a".to_string(), set(0.9, 1.0, 1.0, 1.0));
        assert!(matches!(
            overfit_matrix(&train, &test),
            Err(ReportError::MismatchedMethods(_))
        ));
    }

    #[test]
    fn renderers_deterministic() {
        let mut means = BTreeMap::new();
        means.insert("a".to_string(), set(0.9, 2.0, 1.0, 20.0));
        means.insert("b".to_string(), set(0.8, 5.0, 2.0, 40.0));
        let layout = glyph_layout(&means).unwrap();
        assert_eq!(render_glyph_svg(&layout), render_glyph_svg(&layout));
        let m = overfit_matrix(&means, &means).unwrap();
        let svg = render_overfit_svg(&m);
        assert_eq!(svg, render_overfit_svg(&m));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
