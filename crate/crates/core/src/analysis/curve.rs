use serde::Serialize;

use super::battery::run_battery;
use crate::error::{Error, Result};
use crate::heuristics::HeuristicSpec;
use crate::instance::DistributionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n_items: usize,
    pub mean_ratio: f64,
    pub n_instances: usize,
}

/// Item counts 10, 20, ..., 100, 150, 200, ..., 500.
pub fn default_grid() -> Vec<usize> {
    (10..=100).step_by(10).chain((150..=500).step_by(50)).collect()
}

/// Mean ratio against BestFit for each stream length in `n_grid`.
///
/// Every point reuses `master_seed`, so the instances at a shorter length are
/// prefixes of those at a longer one and a single-point curve equals a
/// battery run with the same seed.
pub fn growing_curve(
    distribution: &DistributionSpec,
    heuristic: &HeuristicSpec,
    n_grid: &[usize],
    n_instances: usize,
    master_seed: u64,
) -> Result<Vec<CurvePoint>> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidDistribution(
            "the item-count grid must be non-empty and strictly increasing".into(),
        ));
    }
    n_grid
        .iter()
        .map(|&n| {
            let spec = distribution.with_items(n);
            let result = run_battery(&spec, std::slice::from_ref(heuristic), n_instances, master_seed)?;
            Ok(CurvePoint {
                n_items: n,
                mean_ratio: result[0].summary.mean,
                n_instances,
            })
        })
        .collect()
}

/// Item count where the curve first drops from `>= 1` to `< 1`, linearly
/// interpolated between grid points. `None` if it never crosses.
pub fn crossover(points: &[CurvePoint]) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (p, q) = (w[0], w[1]);
        (p.mean_ratio >= 1.0 && q.mean_ratio < 1.0).then(|| {
            let t = (p.mean_ratio - 1.0) / (p.mean_ratio - q.mean_ratio);
            p.n_items as f64 + t * (q.n_items - p.n_items) as f64
        })
    })
}
