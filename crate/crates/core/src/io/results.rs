//! Results tables: one row per (case, method) with the four metrics in
//! fixed column order and 4-decimal formatting. Row order is deterministic
//! (case id, then method).

use std::collections::BTreeMap;
use std::path::Path;

use super::IoError;
use crate::metrics::MetricSet;

pub const RESULTS_HEADER: &str = "case_id,method,DICE,RAVD,ASSD,MSSD";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub case_id: String,
    pub method: String,
    pub metrics: MetricSet,
}

fn format_row(case_id: &str, method: &str, m: &MetricSet) -> String {
    format!(
        "{case_id},{method},{:.4},{:.4},{:.4},{:.4}",
        m.dice, m.ravd_percent, m.assd_mm, m.mssd_mm
    )
}

pub fn write_results(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.case_id, &a.method).cmp(&(&b.case_id, &b.method)));
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for row in sorted {
        out.push_str(&format_row(&row.case_id, &row.method, &row.metrics));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>, IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == RESULTS_HEADER => {}
        other => {
            return Err(IoError::ParseError(format!(
                "unexpected results header {other:?}"
            )));
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(IoError::ParseError(format!(
                "results line {}: expected 6 fields, got {}",
                lineno + 2,
                parts.len()
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| IoError::ParseError(format!("bad number '{s}'")))
        };
        rows.push(ResultRow {
            case_id: parts[0].to_string(),
            method: parts[1].to_string(),
            metrics: MetricSet {
                dice: num(parts[2])?,
                ravd_percent: num(parts[3])?,
                assd_mm: num(parts[4])?,
                mssd_mm: num(parts[5])?,
            },
        });
    }
    Ok(rows)
}

/// Per-method mean of each metric over all cases.
pub fn mean_metrics(rows: &[ResultRow]) -> BTreeMap<String, MetricSet> {
    let mut acc: BTreeMap<String, (MetricSet, usize)> = BTreeMap::new();
    for row in rows {
        let entry = acc.entry(row.method.clone()).or_insert((
            MetricSet {
                dice: 0.0,
                ravd_percent: 0.0,
                assd_mm: 0.0,
                mssd_mm: 0.0,
            },
            0,
        ));
        entry.0.dice += row.metrics.dice;
        entry.0.ravd_percent += row.metrics.ravd_percent;
        entry.0.assd_mm += row.metrics.assd_mm;
        entry.0.mssd_mm += row.metrics.mssd_mm;
        entry.1 += 1;
    }
    acc.into_iter()
        .map(|(method, (sum, n))| {
            let n = n as f64;
            (
                method,
                MetricSet {
                    dice: sum.dice / n,
                    ravd_percent: sum.ravd_percent / n,
                    assd_mm: sum.assd_mm / n,
                    mssd_mm: sum.mssd_mm / n,
                },
            )
        })
        .collect()
}

pub const MEANS_HEADER: &str = "method,DICE,RAVD,ASSD,MSSD";

pub fn write_means(
    means: &BTreeMap<String, MetricSet>,
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    let mut out = String::from(MEANS_HEADER);
    out.push('\n');
    for (method, m) in means {
        out.push_str(&format!(
            "{method},{:.4},{:.4},{:.4},{:.4}\n",
            m.dice, m.ravd_percent, m.assd_mm, m.mssd_mm
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_means(path: impl AsRef<Path>) -> Result<BTreeMap<String, MetricSet>, IoError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == MEANS_HEADER => {}
        other => {
            return Err(IoError::ParseError(format!(
                "unexpected means header {other:?}"
            )));
        }
    }
    let mut out = BTreeMap::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(IoError::ParseError(format!("bad means line '{line}'")));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| IoError::ParseError(format!("bad number '{s}'")))
        };
        out.insert(
            parts[0].to_string(),
            MetricSet {
                dice: num(parts[1])?,
                ravd_percent: num(parts[2])?,
                assd_mm: num(parts[3])?,
                mssd_mm: num(parts[4])?,
            },
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(case: &str, method: &str, dice: f64) -> ResultRow {
        ResultRow {
            case_id: case.into(),
            method: method.into(),
            metrics: MetricSet {
                dice,
                ravd_percent: 1.23456,
                assd_mm: 2.5,
                mssd_mm: 10.0,
            },
        }
    }

    #[test]
    fn empty_rows_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_results(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            format!("{RESULTS_HEADER}\n")
        );
    }

    #[test]
    fn one_row_two_lines_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_results(&[row("c1", "average", 0.9512)], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let back = read_results(&path).unwrap();
        assert_eq!(back[0].metrics.dice, 0.9512);
        assert_eq!(back[0].metrics.ravd_percent, 1.2346); // 4-decimal rounding
    }

    #[test]
    fn rows_sorted_case_then_method() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_results(
            &[
                row("c2", "b", 0.5),
                row("c1", "b", 0.5),
                row("c1", "a", 0.5),
            ],
            &path,
        )
        .unwrap();
        let back = read_results(&path).unwrap();
        let order: Vec<(String, String)> = back
            .iter()
            .map(|r| (r.case_id.clone(), r.method.clone()))
            .collect();
        assert_eq!(
            order,
            vec![
                ("c1".into(), "a".into()),
                ("c1".into(), "b".into()),
                ("c2".into(), "b".into())
            ]
        );
    }

    #[test]
    fn means_round_trip() {
        let rows = vec![row("c1", "a", 0.8), row("c2", "a", 0.6), row("c1", "b", 1.0)];
        let means = mean_metrics(&rows);
        assert!((means["a"].dice - 0.7).abs() < 1e-12);
        assert_eq!(means["b"].dice, 1.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_means(&means, &path).unwrap();
        let back = read_means(&path).unwrap();
        assert!((back["a"].dice - 0.7).abs() < 1e-4);
    }
}
