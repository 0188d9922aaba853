//! Experiments built on the packing harness.

pub mod adversarial;
pub mod audit;
pub mod battery;
pub mod curve;
pub mod diff;
pub mod output;
pub mod sweep;

pub use adversarial::{adversarial_check, exact_period, predicted_fill, AdversarialReport};
pub use audit::{dead_branch_audit, TierAudit};
pub use battery::{run_battery, run_battery_on, BatteryResult, InstanceRatio, RatioSummary};
pub use curve::{crossover, default_grid, growing_curve, CurvePoint};
pub use diff::{behavior_diff, threshold_scan, DiffCategory, DiffEvent, DiffSummary, ThresholdScan};
pub use sweep::{ab_sweep, ab_sweep_on, chebyshev, default_ranges, SweepCell, SweepResult};
