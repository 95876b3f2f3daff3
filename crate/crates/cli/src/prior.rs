//! Foreground-prior resolution shared by combine and evaluate.

use anyhow::{Context, anyhow};
use segfuse::fusion::estimate_prior;
use segfuse::io::{CaseManifest, PriorSource, RunConfig, Split, read_volume};
use segfuse::{BinaryMask, ForegroundPrior};

/// Resolve the prior from the config: either the explicit value or an
/// estimate over the training-split ground-truth masks.
pub fn resolve_prior(config: &RunConfig, cases: &[CaseManifest]) -> anyhow::Result<ForegroundPrior> {
    match config.prior {
        PriorSource::Explicit { value } => {
            ForegroundPrior::new(value).map_err(|e| anyhow!(e.to_string()))
        }
        PriorSource::Estimate => {
            let masks: Vec<BinaryMask> = cases
                .iter()
                .filter(|c| c.split == Split::Train)
                .map(|c| {
                    read_volume(&c.ground_truth)
                        .and_then(|v| v.into_mask())
                        .with_context(|| {
                            format!("reading training mask {}", c.ground_truth.display())
                        })
                })
                .collect::<anyhow::Result<_>>()?;
            if masks.is_empty() {
                return Err(anyhow!(
                    "prior estimation needs at least one training case; \
                     use an explicit prior or add train cases"
                ));
            }
            estimate_prior(&masks).map_err(|e| anyhow!(e.to_string()))
        }
    }
}
