//! Driver/shadow comparison: the driver heuristic evolves the pool, and at
//! every step the shadow's choice on the same pool is computed and dropped.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::heuristics::HeuristicSpec;
use crate::instance::Instance;
use crate::packing::PackingState;

/// How the two choices for one item relate. "New" means the chosen bin was
/// empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DiffCategory {
    BothNew,
    SameOld,
    DifferentOld,
    DriverNewShadowOld,
    ShadowNewDriverOld,
}

impl DiffCategory {
    pub const ALL: [DiffCategory; 5] = [
        DiffCategory::BothNew,
        DiffCategory::SameOld,
        DiffCategory::DifferentOld,
        DiffCategory::DriverNewShadowOld,
        DiffCategory::ShadowNewDriverOld,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiffCategory::BothNew => "both_new",
            DiffCategory::SameOld => "same_old",
            DiffCategory::DifferentOld => "different_old",
            DiffCategory::DriverNewShadowOld => "a_new_b_old",
            DiffCategory::ShadowNewDriverOld => "b_new_a_old",
        }
    }

    pub fn classify(driver_bin: usize, driver_new: bool, shadow_bin: usize, shadow_new: bool) -> Self {
        match (driver_new, shadow_new) {
            (true, true) => DiffCategory::BothNew,
            (true, false) => DiffCategory::DriverNewShadowOld,
            (false, true) => DiffCategory::ShadowNewDriverOld,
            (false, false) if driver_bin == shadow_bin => DiffCategory::SameOld,
            (false, false) => DiffCategory::DifferentOld,
        }
    }
}

/// The driver opened a bin where the shadow would have used an opened one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiffEvent {
    pub item_index: usize,
    pub item_size: u32,
    /// Remaining capacity of the shadow's bin after it would take the item.
    pub remaining_after: u32,
    pub remaining_before: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiffSummary {
    pub both_new: usize,
    pub same_old: usize,
    pub different_old: usize,
    pub a_new_b_old: usize,
    pub b_new_a_old: usize,
    pub events: Vec<DiffEvent>,
}

impl DiffSummary {
    pub fn count(&self, category: DiffCategory) -> usize {
        match category {
            DiffCategory::BothNew => self.both_new,
            DiffCategory::SameOld => self.same_old,
            DiffCategory::DifferentOld => self.different_old,
            DiffCategory::DriverNewShadowOld => self.a_new_b_old,
            DiffCategory::ShadowNewDriverOld => self.b_new_a_old,
        }
    }

    fn bump(&mut self, category: DiffCategory) {
        let slot = match category {
            DiffCategory::BothNew => &mut self.both_new,
            DiffCategory::SameOld => &mut self.same_old,
            DiffCategory::DifferentOld => &mut self.different_old,
            DiffCategory::DriverNewShadowOld => &mut self.a_new_b_old,
            DiffCategory::ShadowNewDriverOld => &mut self.b_new_a_old,
        };
        *slot += 1;
    }

    pub fn total(&self) -> usize {
        DiffCategory::ALL.iter().map(|&c| self.count(c)).sum()
    }

    /// Adds another summary's counts and events.
    pub fn merge(&mut self, other: DiffSummary) {
        self.both_new += other.both_new;
        self.same_old += other.same_old;
        self.different_old += other.different_old;
        self.a_new_b_old += other.a_new_b_old;
        self.b_new_a_old += other.b_new_a_old;
        self.events.extend(other.events);
    }
}

/// Classifies every decision of `driver` against the counterfactual choice of
/// `shadow` on the driver's pool.
pub fn behavior_diff(
    instance: &Instance,
    driver: &HeuristicSpec,
    shadow: &HeuristicSpec,
) -> Result<DiffSummary> {
    instance.validate()?;
    driver.validate(instance.capacity)?;
    shadow.validate(instance.capacity)?;
    let mut state = PackingState::for_instance(instance);
    let mut summary = DiffSummary::default();
    for (index, &item) in instance.items.iter().enumerate() {
        let shadow_bin = state.select(item, shadow)?;
        let shadow_new = state.is_empty_bin(shadow_bin);
        let shadow_before = state.remaining()[shadow_bin];
        let driver_bin = state.select(item, driver)?;
        let driver_new = state.is_empty_bin(driver_bin);
        let category = DiffCategory::classify(driver_bin, driver_new, shadow_bin, shadow_new);
        summary.bump(category);
        if category == DiffCategory::DriverNewShadowOld {
            summary.events.push(DiffEvent {
                item_index: index,
                item_size: item,
                remaining_after: shadow_before - item,
                remaining_before: shadow_before,
            });
        }
        state.commit(item, driver_bin);
    }
    Ok(summary)
}

/// Distribution of the shadow's remaining-after values over driver-new /
/// shadow-old events.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ThresholdScan {
    pub n_events: usize,
    pub max_remaining_after: Option<u32>,
    pub histogram: BTreeMap<u32, usize>,
}

impl ThresholdScan {
    pub fn is_empty(&self) -> bool {
        self.n_events == 0
    }

    /// Share of events with remaining-after at most `limit`; 1 when empty.
    pub fn fraction_at_most(&self, limit: u32) -> f64 {
        if self.n_events == 0 {
            return 1.0;
        }
        let below: usize = self.histogram.range(..=limit).map(|(_, &n)| n).sum();
        below as f64 / self.n_events as f64
    }
}

pub fn threshold_scan(diff: &DiffSummary) -> ThresholdScan {
    let mut scan = ThresholdScan::default();
    for e in &diff.events {
        *scan.histogram.entry(e.remaining_after).or_default() += 1;
        scan.n_events += 1;
        scan.max_remaining_after = scan.max_remaining_after.max(Some(e.remaining_after));
    }
    scan
}
