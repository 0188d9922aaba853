use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::gen_battery;
use crate::heuristics::HeuristicSpec;
use crate::instance::{DistributionSpec, Instance};
use crate::packing::bins_used;

/// Bins used on one instance by a heuristic and by BestFit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRatio {
    pub instance_id: String,
    pub bins_used: usize,
    pub bins_used_bestfit: usize,
    pub ratio: f64,
}

/// Location and spread of per-instance ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
    /// `sum(bins_used) / sum(bins_used_bestfit)`.
    pub aggregate_ratio: f64,
}

impl RatioSummary {
    pub fn from_rows(rows: &[InstanceRatio]) -> Self {
        let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        let mut sorted = ratios.clone();
        sorted.sort_by(f64::total_cmp);
        let used: usize = rows.iter().map(|r| r.bins_used).sum();
        let base: usize = rows.iter().map(|r| r.bins_used_bestfit).sum();
        RatioSummary {
            n: rows.len(),
            mean: mean(&ratios),
            median: quantile(&sorted, 0.5),
            q1: quantile(&sorted, 0.25),
            q3: quantile(&sorted, 0.75),
            min: sorted.first().copied().unwrap_or(f64::NAN),
            max: sorted.last().copied().unwrap_or(f64::NAN),
            aggregate_ratio: used as f64 / base as f64,
        }
    }
}

/// Mean accumulated in input order.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Linearly interpolated quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = q * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        }
    }
}

/// Performance of one heuristic relative to BestFit over a battery.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryResult {
    pub distribution: DistributionSpec,
    pub heuristic: HeuristicSpec,
    pub per_instance: Vec<InstanceRatio>,
    pub summary: RatioSummary,
}

pub(crate) fn bins_in_context(instance: &Instance, heuristic: &HeuristicSpec, index: usize) -> Result<usize> {
    bins_used(instance, heuristic).map_err(|e| Error::InRun {
        heuristic: heuristic.to_string(),
        instance: format!("#{index} (seed {})", instance.seed),
        source: Box::new(e),
    })
}

/// BestFit bins for every instance.
pub fn bestfit_bins(instances: &[Instance]) -> Result<Vec<usize>> {
    instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| bins_in_context(inst, &HeuristicSpec::BestFit, i))
        .collect()
}

/// Evaluates every heuristic on the same, already generated instances.
pub fn run_battery_on(
    distribution: &DistributionSpec,
    instances: &[Instance],
    heuristics: &[HeuristicSpec],
) -> Result<Vec<BatteryResult>> {
    for h in heuristics {
        h.validate(distribution.capacity)?;
    }
    let base = bestfit_bins(instances)?;
    heuristics
        .iter()
        .map(|h| {
            let used: Vec<usize> = if *h == HeuristicSpec::BestFit {
                base.clone()
            } else {
                instances
                    .par_iter()
                    .enumerate()
                    .map(|(i, inst)| bins_in_context(inst, h, i))
                    .collect::<Result<_>>()?
            };
            let per_instance: Vec<InstanceRatio> = used
                .iter()
                .zip(&base)
                .enumerate()
                .map(|(i, (&u, &b))| InstanceRatio {
                    instance_id: i.to_string(),
                    bins_used: u,
                    bins_used_bestfit: b,
                    ratio: u as f64 / b as f64,
                })
                .collect();
            Ok(BatteryResult {
                distribution: distribution.clone(),
                heuristic: *h,
                summary: RatioSummary::from_rows(&per_instance),
                per_instance,
            })
        })
        .collect()
}

/// Generates `n_instances` instances and evaluates every heuristic on them,
/// BestFit being the denominator of each ratio.
pub fn run_battery(
    distribution: &DistributionSpec,
    heuristics: &[HeuristicSpec],
    n_instances: usize,
    master_seed: u64,
) -> Result<Vec<BatteryResult>> {
    let instances = gen_battery(distribution, n_instances, master_seed)?;
    run_battery_on(distribution, &instances, heuristics)
}
