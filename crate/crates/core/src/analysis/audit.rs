use serde::Serialize;

use crate::error::Result;
use crate::heuristics::{C12Tier, HeuristicSpec};
use crate::instance::Instance;
use crate::packing::pack_instance;

/// How often each c12 branch produced the winning score.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TierAudit {
    pub counts: [usize; C12Tier::COUNT],
}

impl TierAudit {
    pub fn count(&self, tier: C12Tier) -> usize {
        self.counts[tier.branch()]
    }

    /// Selections whose score was 0.9, 0.95, 0.97 or 0.98.
    pub fn mid_band_selections(&self) -> usize {
        C12Tier::all()
            .filter(|t| t.is_mid_band())
            .map(|t| self.count(t))
            .sum()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Runs c12 on every instance and tallies the branch of each selected bin.
pub fn dead_branch_audit(instances: &[Instance]) -> Result<TierAudit> {
    let mut audit = TierAudit::default();
    for instance in instances {
        let run = pack_instance(instance, &HeuristicSpec::C12, true)?;
        for e in run.trace.expect("trace was requested") {
            let gap = i64::from(e.remaining_before) - i64::from(e.item_size);
            audit.counts[C12Tier::of_gap(gap).branch()] += 1;
        }
    }
    Ok(audit)
}
