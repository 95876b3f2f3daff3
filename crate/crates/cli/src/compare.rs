//! `compare`: statistical comparison of each ensemble against each
//! individual segmenter, per metric, with win/loss score aggregation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use segfuse::MetricSet;
use segfuse::io::{RunConfig, read_results};
use segfuse::stats::{
    Direction, MetricKind, Sample, StatsError, Verdict, WinLossTable, aggregate_scores,
    compare_paired, compare_unpaired,
};

#[derive(Args)]
pub struct CompareArgs {
    /// Path to the run configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Results table to compare; defaults to <output_dir>/results_test.csv.
    #[arg(long)]
    pub results: Option<PathBuf>,
    /// Treat the methods as independent samples instead of case-paired ones.
    #[arg(long)]
    pub unpaired: bool,
}

const ENSEMBLES: [&str; 4] = ["majority_vote", "average", "product", "min_max"];

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::EnsembleWins => "ensemble_wins",
        Verdict::DmWins => "dm_wins",
        Verdict::NoDifference => "no_difference",
    }
}

pub fn run(args: &CompareArgs) -> anyhow::Result<i32> {
    let config = RunConfig::load(&args.config)?;
    let results_path = args
        .results
        .clone()
        .unwrap_or_else(|| config.output_dir.join("results_test.csv"));
    let rows = read_results(&results_path)?;
    // method -> case -> metrics
    let mut by_method: BTreeMap<String, BTreeMap<String, MetricSet>> = BTreeMap::new();
    for row in rows {
        by_method
            .entry(row.method)
            .or_default()
            .insert(row.case_id, row.metrics);
    }
    let ensembles: Vec<String> = ENSEMBLES
        .iter()
        .filter(|e| by_method.contains_key(**e))
        .map(|e| e.to_string())
        .collect();
    let dms: Vec<String> = by_method
        .keys()
        .filter(|m| !ENSEMBLES.contains(&m.as_str()))
        .cloned()
        .collect();
    if ensembles.is_empty() || dms.is_empty() {
        return Err(anyhow!(
            "results at {} must contain both ensemble and individual methods",
            results_path.display()
        ));
    }
    // every method must cover the same cases for a paired protocol
    let case_ids: Vec<String> = by_method.values().next().unwrap().keys().cloned().collect();
    for (method, cases) in &by_method {
        if cases.keys().cloned().collect::<Vec<_>>() != case_ids {
            return Err(anyhow!("method '{method}' does not cover all cases"));
        }
    }
    let values = |method: &str, metric: MetricKind| -> Sample {
        let v = case_ids
            .iter()
            .map(|c| metric.of(&by_method[method][c]))
            .collect();
        Sample::new(v, method)
    };
    let mut table = WinLossTable::new(vec!["all".to_string()], dms.clone(), ensembles.clone());
    let mut detail = String::from("metric,dm,ensemble,test,p_value,verdict\n");
    for metric in MetricKind::ALL {
        for dm in &dms {
            for ens in &ensembles {
                let x = values(ens, metric);
                let y = values(dm, metric);
                let result = if args.unpaired {
                    compare_unpaired(&x, &y, config.alpha, metric.polarity())
                } else {
                    compare_paired(&x, &y, config.alpha, metric.polarity())
                };
                let (verdict, test_name, p) = match result {
                    Ok(r) => {
                        let v = match r.direction {
                            Direction::FirstBetter => Verdict::EnsembleWins,
                            Direction::SecondBetter => Verdict::DmWins,
                            Direction::NoDifference => Verdict::NoDifference,
                        };
                        (v, r.test_used.name(), r.p_value)
                    }
                    // too few informative pairs to call either way
                    Err(StatsError::TooFewSamples { .. } | StatsError::DegenerateSample) => {
                        (Verdict::NoDifference, "none", f64::NAN)
                    }
                    Err(e) => return Err(e.into()),
                };
                table.set("all", metric, dm, ens, verdict);
                detail.push_str(&format!(
                    "{},{dm},{ens},{test_name},{p:.6},{}\n",
                    metric.name(),
                    verdict_name(verdict)
                ));
            }
        }
    }
    let scores = aggregate_scores(&table)?;
    std::fs::create_dir_all(&config.output_dir)?;
    std::fs::write(config.output_dir.join("comparison.csv"), &detail)?;
    let mut score_text = String::from("ensemble,score\n");
    for (ens, score) in &scores {
        score_text.push_str(&format!("{ens},{score}\n"));
    }
    std::fs::write(config.output_dir.join("scores.csv"), &score_text)?;
    print!("{detail}");
    println!("scores:");
    for (ens, score) in &scores {
        println!("  {ens}: {score}");
    }
    Ok(0)
}
