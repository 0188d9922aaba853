//! A laboratory for stochastic online bin packing.
//!
//! [`packing`] holds the pooled online harness and [`heuristics`] the priority
//! functions it drives. Instances and their seeded generators live in
//! [`instance`] and [`generate`]; [`analysis`] runs the experiments on top and
//! writes their tables.

pub mod analysis;
pub mod error;
pub mod generate;
pub mod heuristics;
pub mod instance;
pub mod packing;

pub use error::{Error, Result};
pub use heuristics::{AbVariant, Baseline, HeuristicSpec};
pub use instance::{Distribution, DistributionSpec, Instance};
pub use packing::{pack_instance, PackingState, PriorityFunction, RunResult, TraceEvent};
