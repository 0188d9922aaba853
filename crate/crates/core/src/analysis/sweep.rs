use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use super::battery::{bestfit_bins, bins_in_context};
use crate::error::{Error, Result};
use crate::generate::gen_battery;
use crate::heuristics::{AbVariant, Baseline, HeuristicSpec};
use crate::instance::{DistributionSpec, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub a: u32,
    pub b: u32,
    pub mean_ratio: f64,
    pub n_instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub baseline: Baseline,
    pub variant: AbVariant,
    pub cells: Vec<SweepCell>,
    /// Cell with the lowest mean ratio; the first in (a, b) order on ties.
    pub best: SweepCell,
}

impl SweepResult {
    pub fn cell(&self, a: u32, b: u32) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.a == a && c.b == b)
    }
}

/// Default threshold ranges: `a` in `0..=15`, `b` in `max(a+1, 10)..=40`.
pub fn default_ranges() -> (RangeInclusive<u32>, RangeInclusive<u32>) {
    (0..=15, 10..=40)
}

/// Cells `(a, b)` of the grid with `a < b < capacity`, in row-major order.
pub fn grid_cells(
    a_range: RangeInclusive<u32>,
    b_range: RangeInclusive<u32>,
    capacity: u32,
) -> Vec<(u32, u32)> {
    a_range
        .flat_map(|a| {
            b_range
                .clone()
                .filter(move |&b| a < b && b < capacity)
                .map(move |b| (a, b))
        })
        .collect()
}

/// Sweeps the ab family over a grid on pre-generated instances.
pub fn ab_sweep_on(
    instances: &[Instance],
    baseline: Baseline,
    variant: AbVariant,
    a_range: RangeInclusive<u32>,
    b_range: RangeInclusive<u32>,
) -> Result<SweepResult> {
    let capacity = instances
        .first()
        .map(|i| i.capacity)
        .ok_or_else(|| Error::InvalidDistribution("a sweep needs at least one instance".into()))?;
    let grid = grid_cells(a_range, b_range, capacity);
    if grid.is_empty() {
        return Err(Error::InvalidParameters {
            heuristic: format!("ab-{}", baseline.short_name()),
            reason: "no cell of the grid satisfies a < b < capacity".into(),
        });
    }
    let base = bestfit_bins(instances)?;
    let cells: Vec<SweepCell> = grid
        .par_iter()
        .map(|&(a, b)| {
            let h = HeuristicSpec::ab_variant(baseline, a, b, variant)?;
            let mut total = 0.0;
            for (i, (inst, &bf)) in instances.iter().zip(&base).enumerate() {
                total += bins_in_context(inst, &h, i)? as f64 / bf as f64;
            }
            Ok(SweepCell {
                a,
                b,
                mean_ratio: total / instances.len() as f64,
                n_instances: instances.len(),
            })
        })
        .collect::<Result<_>>()?;
    let best = *cells
        .iter()
        .reduce(|best, c| if c.mean_ratio < best.mean_ratio { c } else { best })
        .expect("grid is non-empty");
    Ok(SweepResult {
        baseline,
        variant,
        cells,
        best,
    })
}

/// Sweeps `(a, b)` over a shared battery of `n_instances` instances.
pub fn ab_sweep(
    distribution: &DistributionSpec,
    baseline: Baseline,
    variant: AbVariant,
    a_range: RangeInclusive<u32>,
    b_range: RangeInclusive<u32>,
    n_instances: usize,
    master_seed: u64,
) -> Result<SweepResult> {
    let instances = gen_battery(distribution, n_instances, master_seed)?;
    ab_sweep_on(&instances, baseline, variant, a_range, b_range)
}

/// Largest coordinate difference between two cells.
pub fn chebyshev(cell: &SweepCell, a: u32, b: u32) -> u32 {
    cell.a.abs_diff(a).max(cell.b.abs_diff(b))
}
