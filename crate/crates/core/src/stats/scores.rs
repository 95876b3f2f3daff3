//! Win/loss score aggregation across comparison tables and per-metric
//! overfitting magnitudes (training value minus testing value).

use std::collections::BTreeMap;

use super::StatsError;
use super::compare::Polarity;
use crate::metrics::MetricSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MetricKind {
    Dice,
    Ravd,
    Assd,
    Mssd,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Dice,
        MetricKind::Ravd,
        MetricKind::Assd,
        MetricKind::Mssd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Dice => "DICE",
            MetricKind::Ravd => "RAVD",
            MetricKind::Assd => "ASSD",
            MetricKind::Mssd => "MSSD",
        }
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            MetricKind::Dice => Polarity::HigherIsBetter,
            _ => Polarity::LowerIsBetter,
        }
    }

    pub fn of(&self, m: &MetricSet) -> f64 {
        match self {
            MetricKind::Dice => m.dice,
            MetricKind::Ravd => m.ravd_percent,
            MetricKind::Assd => m.assd_mm,
            MetricKind::Mssd => m.mssd_mm,
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "DICE" => Ok(MetricKind::Dice),
            "RAVD" => Ok(MetricKind::Ravd),
            "ASSD" => Ok(MetricKind::Assd),
            "MSSD" => Ok(MetricKind::Mssd),
            other => Err(format!("unknown metric '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    EnsembleWins,
    DmWins,
    NoDifference,
}

/// One cell address: (dataset, metric, individual segmenter, ensemble).
pub type WinLossKey = (String, MetricKind, String, String);

/// Complete verdict table over datasets x metrics x segmenters x ensembles.
#[derive(Debug, Clone, Default)]
pub struct WinLossTable {
    pub datasets: Vec<String>,
    pub dms: Vec<String>,
    pub ensembles: Vec<String>,
    pub verdicts: BTreeMap<WinLossKey, Verdict>,
}

impl WinLossTable {
    pub fn new(datasets: Vec<String>, dms: Vec<String>, ensembles: Vec<String>) -> Self {
        WinLossTable {
            datasets,
            dms,
            ensembles,
            verdicts: BTreeMap::new(),
        }
    }

    pub fn set(
        &mut self,
        dataset: &str,
        metric: MetricKind,
        dm: &str,
        ensemble: &str,
        verdict: Verdict,
    ) {
        self.verdicts.insert(
            (
                dataset.to_string(),
                metric,
                dm.to_string(),
                ensemble.to_string(),
            ),
            verdict,
        );
    }

    pub fn get(&self, dataset: &str, metric: MetricKind, dm: &str, ensemble: &str) -> Option<Verdict> {
        self.verdicts
            .get(&(
                dataset.to_string(),
                metric,
                dm.to_string(),
                ensemble.to_string(),
            ))
            .copied()
    }
}

/// Score per ensemble: one point per win, minus one per loss, over every
/// (dataset, metric, segmenter) cell. Requires a complete table.
pub fn aggregate_scores(table: &WinLossTable) -> Result<BTreeMap<String, i32>, StatsError> {
    let mut scores: BTreeMap<String, i32> = table
        .ensembles
        .iter()
        .map(|e| (e.clone(), 0))
        .collect();
    for ds in &table.datasets {
        for metric in MetricKind::ALL {
            for dm in &table.dms {
                for ens in &table.ensembles {
                    let v = table.get(ds, metric, dm, ens).ok_or_else(|| {
                        StatsError::IncompleteTable(format!(
                            "{ds}/{}/{dm}/{ens}",
                            metric.name()
                        ))
                    })?;
                    let delta = match v {
                        Verdict::EnsembleWins => 1,
                        Verdict::DmWins => -1,
                        Verdict::NoDifference => 0,
                    };
                    *scores.get_mut(ens).unwrap() += delta;
                }
            }
        }
    }
    Ok(scores)
}

/// Signed per-metric overfitting magnitudes: training minus testing, no
/// polarity flip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverfitMagnitudes {
    pub dice: f64,
    pub ravd: f64,
    pub assd: f64,
    pub mssd: f64,
}

impl OverfitMagnitudes {
    pub fn get(&self, metric: MetricKind) -> f64 {
        match metric {
            MetricKind::Dice => self.dice,
            MetricKind::Ravd => self.ravd,
            MetricKind::Assd => self.assd,
            MetricKind::Mssd => self.mssd,
        }
    }
}

pub fn overfit_magnitude(train: &MetricSet, test: &MetricSet) -> OverfitMagnitudes {
    OverfitMagnitudes {
        dice: train.dice - test.dice,
        ravd: train.ravd_percent - test.ravd_percent,
        assd: train.assd_mm - test.assd_mm,
        mssd: train.mssd_mm - test.mssd_mm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_table(verdict_for: impl Fn(&str) -> Verdict) -> WinLossTable {
        let mut t = WinLossTable::new(
            vec!["d1".into(), "d2".into()],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()],
        );
        for ds in ["d1", "d2"] {
            for metric in MetricKind::ALL {
                for dm in ["a", "b", "c", "d"] {
                    for ens in ["e1", "e2", "e3", "e4"] {
                        t.set(ds, metric, dm, ens, verdict_for(ens));
                    }
                }
            }
        }
        t
    }

    #[test]
    fn all_wins_scores_32() {
        let t = full_table(|e| {
            if e == "e1" {
                Verdict::EnsembleWins
            } else {
                Verdict::NoDifference
            }
        });
        let s = aggregate_scores(&t).unwrap();
        assert_eq!(s["e1"], 32);
        assert_eq!(s["e2"], 0);
    }

    #[test]
    fn all_no_difference_scores_zero() {
        let t = full_table(|_| Verdict::NoDifference);
        let s = aggregate_scores(&t).unwrap();
        assert!(s.values().all(|&v| v == 0));
    }

    #[test]
    fn incomplete_table_rejected() {
        let mut t = full_table(|_| Verdict::NoDifference);
        t.verdicts
            .remove(&("d1".to_string(), MetricKind::Dice, "a".to_string(), "e1".to_string()));
        assert!(matches!(
            aggregate_scores(&t),
            Err(StatsError::IncompleteTable(_))
        ));
    }

    #[test]
    fn overfit_signed_no_polarity_flip() {
        let train = MetricSet {
            dice: 0.935,
            ravd_percent: 1.115,
            assd_mm: 2.0,
            mssd_mm: 50.0,
        };
        let test = MetricSet {
            dice: 0.811,
            ravd_percent: 3.058,
            assd_mm: 5.0,
            mssd_mm: 80.0,
        };
        let o = overfit_magnitude(&train, &test);
        assert!((o.dice - 0.124).abs() < 1e-12);
        assert!((o.ravd - (-1.943)).abs() < 1e-12);
        assert_eq!(o.assd, -3.0);
        assert_eq!(o.mssd, -30.0);
        let zero = overfit_magnitude(&train, &train);
        assert_eq!(zero, OverfitMagnitudes { dice: 0.0, ravd: 0.0, assd: 0.0, mssd: 0.0 });
    }
}
