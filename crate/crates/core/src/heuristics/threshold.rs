//! Two-threshold heuristics: tight fits first, then a baseline rule over
//! bins left with plenty of room, then a fresh bin.
//!
//! With `gap = bin - item`, a bin is *tight* when `gap <= a`, *mid* when
//! `a < gap <= b` and *loose* when `gap > b`.

use serde::{Deserialize, Serialize};

/// Rule applied among loose bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Baseline {
    FirstFit,
    BestFit,
    WorstFit,
}

impl Baseline {
    pub fn short_name(self) -> &'static str {
        match self {
            Baseline::FirstFit => "ff",
            Baseline::BestFit => "bf",
            Baseline::WorstFit => "wf",
        }
    }
}

/// Which scoring table to use for the ab family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum AbVariant {
    /// The published listings as written: tight `capacity - bin`, mid `0`,
    /// loose `1`, `1/gap` or `-1/gap`. For the WorstFit baseline this ranks
    /// mid bins above loose ones.
    Verbatim,
    /// Scores that realize the ordering tight > opened loose > new bin >
    /// opened mid: tight `capacity - bin`, opened loose in `(0, 1]`, empty
    /// (non-tight) `-capacity`, opened mid `-2 capacity`.
    #[default]
    Faithful,
}

impl AbVariant {
    pub fn name(self) -> &'static str {
        match self {
            AbVariant::Verbatim => "verbatim",
            AbVariant::Faithful => "faithful",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Tight,
    Mid,
    Loose,
}

pub fn band(item: u32, bin: u32, a: u32, b: u32) -> Band {
    let bin = u64::from(bin);
    let item = u64::from(item);
    if bin <= item + u64::from(a) {
        Band::Tight
    } else if bin <= item + u64::from(b) {
        Band::Mid
    } else {
        Band::Loose
    }
}

/// Score of one bin under the ab family.
pub fn ab_score(
    item: u32,
    bin: u32,
    capacity: u32,
    a: u32,
    b: u32,
    baseline: Baseline,
    variant: AbVariant,
) -> f64 {
    let cap = f64::from(capacity);
    match band(item, bin, a, b) {
        Band::Tight => cap - f64::from(bin),
        _ if variant == AbVariant::Faithful && bin == capacity => -cap,
        Band::Mid => match variant {
            AbVariant::Verbatim => 0.0,
            AbVariant::Faithful => -2.0 * cap,
        },
        Band::Loose => {
            let gap = f64::from(bin - item);
            match (baseline, variant) {
                (Baseline::FirstFit, _) => 1.0,
                (Baseline::BestFit, _) => 1.0 / gap,
                (Baseline::WorstFit, AbVariant::Verbatim) => -1.0 / gap,
                (Baseline::WorstFit, AbVariant::Faithful) => 1.0 - 1.0 / gap,
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn ab_into(
    item: u32,
    bins: &[u32],
    capacity: u32,
    a: u32,
    b: u32,
    baseline: Baseline,
    variant: AbVariant,
    out: &mut Vec<f64>,
) {
    out.extend(
        bins.iter()
            .map(|&bin| ab_score(item, bin, capacity, a, b, baseline, variant)),
    );
}
