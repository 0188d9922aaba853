//! Constant item streams that defeat the loose-band threshold.
//!
//! With every item of size `s`, a faithful ab heuristic keeps adding to the
//! current bin while the bin stays loose (`remaining > s + b`). Bin `j`-th
//! placements therefore stop after
//! `m = |{ j >= 1 : c - (j-1) s > s + b }|` items, and the bin is closed with
//! `c - m s` unused. An optimal packing puts `floor(c / s)` items in each bin.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heuristics::{band, AbVariant, Band, Baseline, HeuristicSpec};
use crate::instance::{Distribution, Instance};
use crate::packing::{lower_bound, pack_instance};

/// Items a faithful ab heuristic puts in each bin of a constant stream.
pub fn predicted_fill(capacity: u32, b: u32, s: u32) -> usize {
    (1u64..)
        .take_while(|&j| {
            let left = i64::from(capacity) - (j as i64 - 1) * i64::from(s);
            left > i64::from(s) + i64::from(b)
        })
        .count()
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn lcm(x: u64, y: u64) -> u64 {
    x / gcd(x, y) * y
}

/// Shortest stream length on which the fill pattern, the optimum and the
/// volume bound all divide evenly.
pub fn exact_period(capacity: u32, b: u32, s: u32) -> usize {
    let m = predicted_fill(capacity, b, s).max(1) as u64;
    let per_bin = u64::from(capacity / s);
    let volume = u64::from(capacity) / gcd(u64::from(capacity), u64::from(s));
    lcm(lcm(m, per_bin), volume) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialReport {
    pub capacity: u32,
    pub a: u32,
    pub b: u32,
    pub s: u32,
    pub baseline: Baseline,
    pub n_items: usize,
    /// Closed-form items per bin.
    pub predicted_fill: usize,
    /// Simulated items per opened bin, in opening order.
    pub fills: Vec<usize>,
    /// Every bin but possibly the last holds exactly `predicted_fill` items.
    pub fill_matches: bool,
    pub bins_used: usize,
    /// `ceil(n / floor(c / s))`.
    pub optimal_bins: usize,
    /// `ceil(n s / c)`.
    pub volume_bound: usize,
    /// `bins_used / optimal_bins`.
    pub measured_ratio: f64,
    /// `floor(c / s) / m`, the limit of `measured_ratio`.
    pub predicted_ratio: f64,
    /// `bins_used / volume_bound`, tending to `c / (m s)`.
    pub ratio_vs_volume_bound: f64,
    /// `c / (c - b)`.
    pub degradation_bound: f64,
}

/// Simulates a constant stream of `s` under the faithful ab heuristic and
/// compares it to the closed form.
pub fn adversarial_check(
    capacity: u32,
    a: u32,
    b: u32,
    s: u32,
    n_items: usize,
    baseline: Baseline,
) -> Result<AdversarialReport> {
    let heuristic = HeuristicSpec::ab_variant(baseline, a, b, AbVariant::Faithful)?;
    heuristic.validate(capacity)?;
    let invalid = |reason: String| Error::InvalidParameters {
        heuristic: heuristic.to_string(),
        reason,
    };
    if s == 0 || u64::from(s) + u64::from(b) >= u64::from(capacity) {
        return Err(invalid(format!(
            "item size must satisfy 1 <= s and s + b < capacity, got s={s} b={b} capacity={capacity}"
        )));
    }
    if n_items == 0 {
        return Err(invalid("the stream needs at least one item".into()));
    }
    let m = predicted_fill(capacity, b, s);
    let left = capacity - m as u32 * s;
    if left >= s && band(s, left, a, b) == Band::Tight {
        return Err(invalid(format!(
            "a bin left with {left} is a tight fit for size {s} under a={a}, so the closed form \
             does not apply"
        )));
    }

    let instance = Instance::new(
        capacity,
        vec![s; n_items],
        Distribution::Adversarial { size: s, threshold: b },
        0,
    )?;
    let run = pack_instance(&instance, &heuristic, true)?;
    let trace = run.trace.expect("trace was requested");
    let mut order: Vec<usize> = Vec::new();
    let mut counts = vec![0usize; n_items];
    for event in &trace {
        if event.was_empty {
            order.push(event.chosen_bin);
        }
        counts[event.chosen_bin] += 1;
    }
    let fills: Vec<usize> = order.iter().map(|&bin| counts[bin]).collect();
    let fill_matches = match fills.split_last() {
        Some((last, rest)) => rest.iter().all(|&f| f == m) && *last <= m && *last >= 1,
        None => false,
    };
    let per_bin = (capacity / s) as usize;
    let optimal_bins = n_items.div_ceil(per_bin);
    let volume_bound = lower_bound(&instance);
    Ok(AdversarialReport {
        capacity,
        a,
        b,
        s,
        baseline,
        n_items,
        predicted_fill: m,
        fill_matches,
        bins_used: run.bins_used,
        optimal_bins,
        volume_bound,
        measured_ratio: run.bins_used as f64 / optimal_bins as f64,
        predicted_ratio: per_bin as f64 / m as f64,
        ratio_vs_volume_bound: run.bins_used as f64 / volume_bound as f64,
        degradation_bound: f64::from(capacity) / f64::from(capacity - b),
        fills,
    })
}
